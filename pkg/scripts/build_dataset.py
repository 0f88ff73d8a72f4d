#!/usr/bin/env python3
"""Regenerate the shipped desk-scale evaluation dataset (data/desk60.jsonl).

Every row is checked against the catalog schema and the query classifier
before writing, so the shipped file can never drift from the feature rules.
"""

import json
from pathlib import Path

from tokenscope.evaluation import load_dataset
from tokenscope.lab.features import query_category
from tokenscope.registry import default_catalog

OUT = Path(__file__).resolve().parents[1] / "src" / "tokenscope" / "data" / "desk60.jsonl"


def market(token, view="token_detail"):
    args = {"view": view}
    if view == "token_detail":
        args["token"] = token
    return {"name": "market_analysis", "arguments": args}


def tx(token):
    return {"name": "transaction_analysis", "arguments": {"token": token}}


def code(token_or_address):
    return {"name": "code_analysis", "arguments": {"token_or_address": token_or_address}}


def pb(project):
    return {"name": "project_background_agent", "arguments": {"project": project}}


def he(token):
    return {"name": "historical_events_agent", "arguments": {"token": token}}


def news(topic=None):
    return {"name": "crypto_news_agent", "arguments": {"topic": topic} if topic else {}}


ADVICE = [
    ("Is Bitcoin a good investment right now?",
     [market("BTC"), tx("BTC"), news("bitcoin"), pb("Bitcoin"), he("BTC")]),
    ("Should I buy Ethereum this month?",
     [market("ETH"), news("ethereum"), pb("Ethereum"), tx("ETH")]),
    ("Is Solana worth buying at these levels?",
     [market("SOL"), pb("Solana"), news("solana"), he("SOL")]),
    ("Give me investment advice on Cardano.",
     [market("ADA"), pb("Cardano"), news("cardano"), tx("ADA"), he("ADA")]),
    ("Should I add Chainlink to my portfolio?",
     [market("LINK"), pb("Chainlink"), news("chainlink"), tx("LINK")]),
    ("Is it safe to invest in Pepe coin?",
     [code("PEPE"), market("PEPE"), pb("Pepe"), tx("PEPE"), news("pepe")]),
    ("Do you think Dogecoin is undervalued?",
     [market("DOGE"), pb("Dogecoin"), news("dogecoin"), he("DOGE")]),
    ("Is Uniswap worth holding for the long term?",
     [market("UNI"), pb("Uniswap"), he("UNI"), news("uniswap")]),
    ("Should I sell my Polygon bags before the unlock?",
     [market("MATIC"), news("polygon"), tx("MATIC"), he("MATIC")]),
    ("Is Avalanche a good buy compared to other layer ones?",
     [market("AVAX"), pb("Avalanche"), news("avalanche"), tx("AVAX")]),
    ("Would investing in XRP be a smart move after the ruling?",
     [market("XRP"), news("xrp"), he("XRP"), pb("XRP")]),
    ("Is Arbitrum overvalued at the current market cap?",
     [market("ARB"), pb("Arbitrum"), tx("ARB"), news("arbitrum")]),
    ("Should I invest in Aptos or wait for a dip?",
     [market("APT"), pb("Aptos"), news("aptos"), he("APT")]),
    ("My portfolio is all stablecoins; should I rotate into BTC?",
     [market("BTC"), news("bitcoin"), he("BTC"), tx("BTC")]),
    ("Is Shiba Inu a good investment for 2026?",
     [market("SHIB"), pb("Shiba Inu"), news("shib"), tx("SHIB")]),
    ("Is it safe to invest in the token at 0xAb5801a7D398351b8bE11C439e05C5B3259aeC9B?",
     [code("0xAb5801a7D398351b8bE11C439e05C5B3259aeC9B")]),
    ("Should I allocate more to Ethereum after the upgrade?",
     [market("ETH"), news("ethereum"), he("ETH"), pb("Ethereum")]),
    ("Give me advice: is Litecoin worth investing in again?",
     [market("LTC"), pb("Litecoin"), news("litecoin"), he("LTC")]),
]

REALTIME = [
    ("What is the current price of Bitcoin?", [market("BTC")]),
    ("Show me the Ethereum price and 24h volume.", [market("ETH")]),
    ("What are the top gainers today?", [market(None, "market_overview")]),
    ("Which tokens are the biggest losers this week?", [market(None, "market_overview")]),
    ("Give me a market overview of the crypto market.", [market(None, "market_overview")]),
    ("Any big whale transfers of USDC lately?", [tx("USDC")]),
    ("Have there been large Bitcoin transactions in the past day?", [tx("BTC")]),
    ("What's the latest crypto news?", [news()]),
    ("Latest news about the Ethereum ETF?", [news("ETF")]),
    ("Show me recent news on Solana.", [news("solana")]),
    ("What is the price chart of Dogecoin looking like?", [market("DOGE")]),
    ("Current trading volume for BNB?", [market("BNB")]),
    ("Show me the candlestick chart for ETH.", [market("ETH")]),
    ("Any whale accumulation in Chainlink recently?", [tx("LINK")]),
    ("What moved the market today?", [market(None, "market_overview"), news()]),
    ("Summarize this week's crypto news.", [news()]),
    ("What major events happened to Bitcoin in recent years?", [he("BTC")]),
    ("Show me the history of Ethereum hacks and incidents.", [he("ETH")]),
    ("Did any token get exploited this week?", [news("exploit")]),
    ("Price of Solana right now?", [market("SOL")]),
    ("How is the Polygon token performing today?", [market("MATIC")]),
    ("Check recent large transfers of Tether.", [tx("USDT")]),
    ("Is there unusual transaction activity on Pepe?", [tx("PEPE")]),
    ("What's the 24h change for Avalanche?", [market("AVAX")]),
    ("Any regulatory news on stablecoins today?", [news("stablecoin")]),
    ("Audit the contract at 0x6B175474E89094C44Da98b954EedeAC495271d0F.",
     [code("0x6B175474E89094C44Da98b954EedeAC495271d0F")]),
    ("Run a security scan of the USDC contract.", [code("USDC")]),
    ("Compare today's performance of BTC and ETH.", [market("BTC"), market("ETH")]),
]

KNOWLEDGE = [
    "Can you explain what blockchain technology is?",
    "What is a smart contract?",
    "Explain the difference between proof of work and proof of stake.",
    "What does HODL mean?",
    "How does a hardware wallet keep funds secure?",
    "What is the definition of tokenomics?",
    "Why do blockchains need consensus mechanisms?",
    "What are gas fees and how do they work?",
    "Explain what a liquidity pool is.",
    "What is the meaning of slippage in trading?",
    "How does staking work on Ethereum?",
    "What is a 51% attack?",
    "Define impermanent loss for me.",
    "Why is decentralization important for a cryptocurrency?",
]


def main():
    rows = []
    for prompt, gold in ADVICE:
        rows.append(("investment_advice", prompt, gold))
    for prompt, gold in REALTIME:
        rows.append(("realtime_info", prompt, gold))
    for prompt in KNOWLEDGE:
        rows.append(("knowledge_qa", prompt, []))

    assert len(rows) == 60, f"expected 60 rows, got {len(rows)}"
    for category, prompt, _gold in rows:
        derived = query_category(prompt)
        assert derived == category, f"{prompt!r}: labeled {category} but classifies as {derived}"

    lines = []
    for i, (category, prompt, gold) in enumerate(rows, start=1):
        lines.append(
            json.dumps(
                {"id": f"q{i:03d}", "prompt": prompt, "category": category, "gold": gold},
                ensure_ascii=True,
            )
        )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n")

    examples = load_dataset(OUT, default_catalog())
    assert len(examples) == 60
    print(f"wrote {OUT} ({len(examples)} examples)")


if __name__ == "__main__":
    main()
