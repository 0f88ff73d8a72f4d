// Candlestick chart rendered client-side from numeric candle data.
// Layout math is separated from canvas drawing so tests can verify geometry
// without a real 2D context.

import type { Candle } from "./types.js";

export interface CandleBox {
  x: number;
  bodyTop: number;
  bodyHeight: number;
  wickTop: number;
  wickBottom: number;
  width: number;
  up: boolean;
}

export interface CandleLayout {
  boxes: CandleBox[];
  min: number;
  max: number;
}

export function computeCandleLayout(
  candles: Candle[],
  width: number,
  height: number,
  padding = 6,
): CandleLayout {
  if (candles.length === 0) {
    return { boxes: [], min: 0, max: 0 };
  }
  const min = Math.min(...candles.map((c) => c.low));
  const max = Math.max(...candles.map((c) => c.high));
  const span = max - min || 1;
  const innerHeight = height - 2 * padding;
  const slot = width / candles.length;
  const bodyWidth = Math.max(1, slot * 0.6);
  const y = (price: number) => padding + ((max - price) / span) * innerHeight;
  const boxes = candles.map((c, i) => {
    const bodyTop = y(Math.max(c.open, c.close));
    const bodyBottom = y(Math.min(c.open, c.close));
    return {
      x: i * slot + (slot - bodyWidth) / 2,
      bodyTop,
      bodyHeight: Math.max(1, bodyBottom - bodyTop),
      wickTop: y(c.high),
      wickBottom: y(c.low),
      width: bodyWidth,
      up: c.close >= c.open,
    };
  });
  return { boxes, min, max };
}

export function drawCandles(canvas: HTMLCanvasElement, candles: Candle[]): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    return;
  }
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const layout = computeCandleLayout(candles, width, height);
  for (const box of layout.boxes) {
    const center = box.x + box.width / 2;
    ctx.strokeStyle = box.up ? "#1a9850" : "#d73027";
    ctx.fillStyle = ctx.strokeStyle;
    ctx.beginPath();
    ctx.moveTo(center, box.wickTop);
    ctx.lineTo(center, box.wickBottom);
    ctx.stroke();
    ctx.fillRect(box.x, box.bodyTop, box.width, box.bodyHeight);
  }
}
