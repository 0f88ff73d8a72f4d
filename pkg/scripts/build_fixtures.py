#!/usr/bin/env python3
"""Regenerate the shipped fixture store (src/tokenscope/fixtures/).

All values are synthesized deterministically (seeded RNG for the ticker
universe) and written through the same content-addressed store the clients
read from, so replay keys always line up with client requests.
"""

import json
import random
import shutil
from datetime import datetime, timezone
from pathlib import Path

from tokenscope.tools.fixtures import FixtureStore
from tokenscope.tools.onchain import SourceBundle
from tokenscope.tools.security import bundle_digest

ROOT = Path(__file__).resolve().parents[1] / "src" / "tokenscope" / "fixtures"

USDC = "0xa0b86991c6218b36c1d19d4a2e9eb0ce3606eb48"
WBTC = "0x2260fac5e5542a773aa44fbcfedf7c193bc2c599"
WETH = "0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2"
DAI = "0x6b175474e89094c44da98b954eedeac495271d0f"
PEPE = "0x6982508145454ce325ddbe47a25d4ec3d2311933"
UNI = "0x1f9840a85d5af5bf1d1762f925bdaddc4201f984"
VAULT = "0xab5801a7d398351b8be11c439e05c5b3259aec9b"  # reentrancy demo
GREETER = "0xcafe00000000000000000000000000000000c0de"  # trivial demo
UNVERIFIED = "0x000000000000000000000000000000000000dead"

EXCHANGE_1 = "0x28c6c06298d514db089934071355e5743bf21d60"
EXCHANGE_2 = "0xdfd5293d8e347dfe59e90efd55b2956a1343963d"
WHALE_A = "0x47ac0fb4f2d84898e4d9e7b4dab3c24507a6d503"
WHALE_B = "0x8eb8a3b98659cce290402893d0123abb75e3ab28"
CONTRACT_1 = "0x5a52e96bacdabb82fd05763e25335261b270efcb"
NOBODY = "0x1111111111111111111111111111111111111111"

MAJORS = [
    ("BTCUSDT", 64250.50, 2.35, 28_500_000_000),
    ("ETHUSDT", 3420.75, 1.82, 15_200_000_000),
    ("SOLUSDT", 188.40, 5.91, 4_800_000_000),
    ("BNBUSDT", 592.10, -0.45, 2_100_000_000),
    ("XRPUSDT", 0.5841, -1.23, 1_950_000_000),
    ("DOGEUSDT", 0.1382, 8.42, 1_700_000_000),
    ("ADAUSDT", 0.4412, 0.67, 820_000_000),
    ("AVAXUSDT", 29.85, -2.18, 610_000_000),
    ("LINKUSDT", 14.52, 3.11, 540_000_000),
    ("MATICUSDT", 0.7215, -3.67, 480_000_000),
    ("UNIUSDT", 8.93, 1.05, 310_000_000),
    ("LTCUSDT", 71.22, 0.21, 290_000_000),
    ("DOTUSDT", 6.38, -0.88, 260_000_000),
    ("ATOMUSDT", 7.94, 1.44, 210_000_000),
    ("NEARUSDT", 5.61, 4.23, 330_000_000),
    ("APTUSDT", 8.12, -1.95, 190_000_000),
    ("ARBUSDT", 1.08, 2.74, 270_000_000),
    ("OPUSDT", 2.31, 3.38, 180_000_000),
    ("PEPEUSDT", 0.0000112, 12.81, 950_000_000),
    ("SHIBUSDT", 0.0000221, 6.17, 730_000_000),
    ("USDCUSDT", 1.0001, 0.01, 6_300_000_000),
    ("TONUSDT", 6.77, -4.52, 420_000_000),
    ("TRXUSDT", 0.1311, 0.95, 350_000_000),
    ("SUIUSDT", 0.9415, 7.63, 240_000_000),
]


def build_tickers():
    rng = random.Random(1906)
    rows = [
        {
            "symbol": symbol,
            "lastPrice": f"{price}",
            "priceChangePercent": f"{change}",
            "quoteVolume": f"{volume}",
        }
        for symbol, price, change, volume in MAJORS
    ]
    for i in range(len(MAJORS), 100):  # synthetic long tail to 100 tickers
        price = round(rng.uniform(0.01, 250.0), 4)
        change = round(rng.uniform(-14.0, 14.0), 2)
        volume = round(rng.uniform(1_000_000, 120_000_000), 2)
        rows.append(
            {
                "symbol": f"TK{i:02d}USDT",
                "lastPrice": f"{price}",
                "priceChangePercent": f"{change}",
                "quoteVolume": f"{volume}",
            }
        )
    return rows


def build_klines(start_price: float, days: int = 30):
    rng = random.Random(int(start_price * 100))
    start_ms = int(datetime(2026, 6, 1, tzinfo=timezone.utc).timestamp() * 1000)
    out = []
    close = start_price
    for i in range(days):
        open_ = close
        close = round(open_ * (1.0 + rng.uniform(-0.035, 0.04)), 2)
        high = round(max(open_, close) * (1.0 + rng.uniform(0.001, 0.02)), 2)
        low = round(min(open_, close) * (1.0 - rng.uniform(0.001, 0.02)), 2)
        volume = round(rng.uniform(10_000, 90_000), 2)
        out.append(
            [
                start_ms + i * 86_400_000,
                f"{open_}",
                f"{high}",
                f"{low}",
                f"{close}",
                f"{volume}",
            ]
        )
    return out


def transfer(hash_suffix, ts, frm, to, amount_tokens, decimals):
    return {
        "hash": "0x" + hash_suffix.rjust(64, "0"),
        "timeStamp": str(ts),
        "from": frm,
        "to": to,
        "value": str(int(amount_tokens * 10**decimals)),
        "tokenDecimal": str(decimals),
    }


VAULT_SOURCE = """\
// SPDX-License-Identifier: MIT
pragma solidity ^0.8.19;

contract TokenVault {
    mapping(address => uint256) public balances;

    function deposit() external payable {
        balances[msg.sender] += msg.value;
    }

    function withdraw(uint256 amount) external {
        require(balances[msg.sender] >= amount, "insufficient");
        (bool ok, ) = msg.sender.call{value: amount}("");
        require(ok, "transfer failed");
        balances[msg.sender] -= amount;
    }
}
"""

GREETER_SOURCE = """\
// SPDX-License-Identifier: MIT
pragma solidity ^0.8.19;

contract Greeter {
    string public greeting = "hello";
}
"""

DAI_MAIN = """\
// SPDX-License-Identifier: AGPL-3.0-or-later
pragma solidity ^0.8.19;

import "./Arithmetic.sol";

contract StableToken {
    using Arithmetic for uint256;
    mapping(address => uint256) public wards;
    uint256 public totalSupply;

    function mint(address usr, uint256 wad) external {
        totalSupply = totalSupply.add(wad);
        wards[usr] = wards[usr].add(wad);
    }
}
"""

DAI_LIB = """\
// SPDX-License-Identifier: AGPL-3.0-or-later
pragma solidity ^0.8.19;

library Arithmetic {
    function add(uint256 x, uint256 y) internal pure returns (uint256 z) {
        unchecked { z = x + y; }
        require(z >= x, "overflow");
    }
}
"""


def detector(check, impact, description, name, filename, lines):
    return {
        "check": check,
        "impact": impact,
        "confidence": "High",
        "description": description,
        "elements": [
            {
                "type": "function",
                "name": name,
                "source_mapping": {"filename_short": filename, "lines": lines},
            }
        ],
    }


def main():
    if ROOT.exists():
        shutil.rmtree(ROOT)
    store = FixtureStore(root=ROOT, mode="record")

    # --- market -----------------------------------------------------------
    tickers = build_tickers()
    store.save("market", {"path": "/ticker/24hr", "params": {}}, tickers)
    store.save(
        "market",
        {"path": "/klines", "params": {"symbol": "BTCUSDT", "interval": "1d", "limit": 30}},
        build_klines(61000.0),
    )
    store.save(
        "market",
        {"path": "/klines", "params": {"symbol": "ETHUSDT", "interval": "1d", "limit": 30}},
        build_klines(3300.0),
    )

    # --- token directory ---------------------------------------------------
    token_map = {
        "btc": WBTC,
        "wbtc": WBTC,
        "bitcoin": WBTC,
        "wrapped bitcoin": WBTC,
        "eth": WETH,
        "ethereum": WETH,
        "weth": WETH,
        "usdc": USDC,
        "usd coin": USDC,
        "dai": DAI,
        "pepe": PEPE,
        "uni": UNI,
        "uniswap": UNI,
        "vaultcoin": VAULT,
        "greetcoin": GREETER,
    }
    store.save("directory", {"op": "token_map"}, token_map)

    # --- explorer: transfers ------------------------------------------------
    # USDC at $1.0001: 2.5M / 0.9M / 1.2M — the middle one sits below the $1M
    # default threshold.
    usdc_transfers = [
        transfer("a1", 1754000000, WHALE_A, EXCHANGE_1, 2_500_000, 6),
        transfer("a2", 1754003600, EXCHANGE_2, NOBODY, 900_000, 6),
        transfer("a3", 1754007200, WHALE_B, WHALE_A, 1_200_000, 6),
    ]
    store.save(
        "explorer",
        {"module": "account", "action": "tokentx", "contractaddress": USDC},
        {"status": "1", "message": "OK", "result": usdc_transfers},
    )
    # WBTC at the BTCUSDT spot (64250.50): 40 / 85 / 12 / 31 BTC
    wbtc_transfers = [
        transfer("b1", 1754010000, WHALE_A, EXCHANGE_1, 40, 8),
        transfer("b2", 1754013600, EXCHANGE_1, WHALE_B, 85, 8),
        transfer("b3", 1754017200, NOBODY, WHALE_A, 12, 8),
        transfer("b4", 1754020800, WHALE_B, CONTRACT_1, 31, 8),
    ]
    store.save(
        "explorer",
        {"module": "account", "action": "tokentx", "contractaddress": WBTC},
        {"status": "1", "message": "OK", "result": wbtc_transfers},
    )
    pepe_transfers = [
        transfer("c1", 1754024400, WHALE_B, EXCHANGE_2, 120_000_000_000, 18),
        transfer("c2", 1754028000, WHALE_A, WHALE_B, 95_000_000_000, 18),
    ]
    store.save(
        "explorer",
        {"module": "account", "action": "tokentx", "contractaddress": PEPE},
        {"status": "1", "message": "OK", "result": pepe_transfers},
    )

    # --- explorer: verified source -------------------------------------------
    store.save(
        "explorer",
        {"module": "contract", "action": "getsourcecode", "address": VAULT},
        {"status": "1", "result": [{"SourceCode": VAULT_SOURCE, "ContractName": "TokenVault"}]},
    )
    store.save(
        "explorer",
        {"module": "contract", "action": "getsourcecode", "address": GREETER},
        {"status": "1", "result": [{"SourceCode": GREETER_SOURCE, "ContractName": "Greeter"}]},
    )
    multi = {
        "language": "Solidity",
        "sources": {
            "contracts/StableToken.sol": {"content": DAI_MAIN},
            "contracts/Arithmetic.sol": {"content": DAI_LIB},
        },
    }
    store.save(
        "explorer",
        {"module": "contract", "action": "getsourcecode", "address": DAI},
        {
            "status": "1",
            "result": [
                {"SourceCode": "{" + json.dumps(multi) + "}", "ContractName": "StableToken"}
            ],
        },
    )
    store.save(
        "explorer",
        {"module": "contract", "action": "getsourcecode", "address": UNVERIFIED},
        {"status": "1", "result": [{"SourceCode": "", "ContractName": ""}]},
    )

    # --- analyzer reports, keyed by bundle digest -----------------------------
    vault_bundle = SourceBundle(address=VAULT, contract_name="TokenVault", files={"TokenVault.sol": VAULT_SOURCE})
    store.save(
        "analyzer",
        {"bundle": bundle_digest(vault_bundle)},
        {
            "success": True,
            "results": {
                "detectors": [
                    detector(
                        "reentrancy-eth",
                        "High",
                        "Reentrancy in TokenVault.withdraw(uint256): state written after external call",
                        "withdraw",
                        "TokenVault.sol",
                        [11, 12, 13, 14, 15],
                    ),
                    detector(
                        "low-level-calls",
                        "Informational",
                        "Low level call in TokenVault.withdraw(uint256)",
                        "withdraw",
                        "TokenVault.sol",
                        [13],
                    ),
                    detector(
                        "timestamp",
                        "Low",
                        "Comparison relies on block metadata",
                        "withdraw",
                        "TokenVault.sol",
                        [12],
                    ),
                    detector(
                        "solc-version",
                        "Informational",
                        "Pragma allows a range of compiler versions",
                        "TokenVault",
                        "TokenVault.sol",
                        [2],
                    ),
                ]
            },
        },
    )
    greeter_bundle = SourceBundle(address=GREETER, contract_name="Greeter", files={"Greeter.sol": GREETER_SOURCE})
    store.save(
        "analyzer",
        {"bundle": bundle_digest(greeter_bundle)},
        {
            "success": True,
            "results": {
                "detectors": [
                    detector(
                        "solc-version",
                        "Informational",
                        "Pragma allows a range of compiler versions",
                        "Greeter",
                        "Greeter.sol",
                        [2],
                    )
                ]
            },
        },
    )
    dai_bundle = SourceBundle(
        address=DAI,
        contract_name="StableToken",
        files={"contracts/StableToken.sol": DAI_MAIN, "contracts/Arithmetic.sol": DAI_LIB},
    )
    store.save(
        "analyzer",
        {"bundle": bundle_digest(dai_bundle)},
        {
            "success": True,
            "results": {
                "detectors": [
                    detector(
                        "unprotected-mint",
                        "Medium",
                        "StableToken.mint(address,uint256) lacks access control",
                        "mint",
                        "contracts/StableToken.sol",
                        [12, 13, 14],
                    ),
                    detector(
                        "solc-version",
                        "Informational",
                        "Pragma allows a range of compiler versions",
                        "StableToken",
                        "contracts/StableToken.sol",
                        [2],
                    ),
                ]
            },
        },
    )

    # --- news & events --------------------------------------------------------
    btc_events = [
        {"date": "2026-07-18", "title": "Spot ETF inflows hit quarterly record",
         "description": "Aggregate spot Bitcoin ETF products recorded their largest quarterly net inflow."},
        {"date": "2026-05-02", "title": "Major exchange settles compliance case",
         "description": "A leading exchange settled with regulators over custody reporting; BTC dipped 4% intraday."},
        {"date": "2026-03-12", "title": "Hash rate reaches all-time high",
         "description": "Network hash rate peaked, pointing to sustained miner investment after the halving."},
        {"date": "2025-11-30", "title": "Payment processor adds BTC settlement",
         "description": "A global payment processor enabled BTC settlement for merchants in 40 countries."},
        {"date": "2025-02-14", "title": "Protocol-level soft fork activated",
         "description": "A backwards-compatible soft fork activated, improving script verification."},
    ]
    store.save("news", {"op": "events", "token": "BTC"}, btc_events)
    eth_events = [
        {"date": "2026-06-20", "title": "Rollup fee market overhaul ships",
         "description": "The latest upgrade restructured blob fees, cutting L2 costs by roughly half."},
        {"date": "2026-01-15", "title": "Staking withdrawals queue clears",
         "description": "The validator exit queue fully cleared for the first time since the upgrade."},
        {"date": "2025-09-01", "title": "Client diversity milestone",
         "description": "No single execution client exceeds 45% network share for the first time."},
    ]
    store.save("news", {"op": "events", "token": "ETH"}, eth_events)

    bitcoin_news = [
        {"published_at": "2026-08-08T09:30:00Z", "headline": "Bitcoin holds above 64k as ETF inflows continue", "category": "markets"},
        {"published_at": "2026-08-07T16:10:00Z", "headline": "Miners expand capacity ahead of difficulty adjustment", "category": "mining"},
        {"published_at": "2026-08-06T11:00:00Z", "headline": "Custody providers report record institutional onboarding", "category": "business"},
        {"published_at": "2026-08-04T08:45:00Z", "headline": "Lightning payment volume doubles year over year", "category": "tech"},
    ]
    store.save("news", {"op": "news", "topic": "bitcoin"}, bitcoin_news)
    etf_news = [
        {"published_at": "2026-08-08T14:00:00Z", "headline": "Spot ETF assets cross new threshold", "category": "markets"},
        {"published_at": "2026-08-07T10:20:00Z", "headline": "Issuer files for combined BTC-ETH index ETF", "category": "regulation"},
        {"published_at": "2026-08-05T13:40:00Z", "headline": "Weekly ETF flows turn positive after two red weeks", "category": "markets"},
        {"published_at": "2026-08-03T09:00:00Z", "headline": "Regulator delays decision on altcoin ETF batch", "category": "regulation"},
        {"published_at": "2026-08-01T15:30:00Z", "headline": "ETF options volume sets a monthly record", "category": "markets"},
        {"published_at": "2026-07-29T12:00:00Z", "headline": "New entrant cuts ETF management fees again", "category": "business"},
    ]
    store.save("news", {"op": "news", "topic": "ETF"}, etf_news)
    global_news = [
        {"published_at": "2026-08-08T17:00:00Z", "headline": "Stablecoin settlement bill advances committee vote", "category": "regulation"},
        {"published_at": "2026-08-08T08:15:00Z", "headline": "Layer-2 bridge exploit contained, funds recovered", "category": "security"},
        {"published_at": "2026-08-07T19:45:00Z", "headline": "Exchange volumes rebound to spring levels", "category": "markets"},
        {"published_at": "2026-08-06T07:30:00Z", "headline": "Tokenized treasury products pass $10B", "category": "business"},
        {"published_at": "2026-08-05T18:20:00Z", "headline": "Major wallet adds hardware signer support", "category": "tech"},
    ]
    store.save("news", {"op": "news", "topic": None}, global_news)

    # --- web search -------------------------------------------------------------
    ethereum_docs = [
        {"url": "https://ethereum.example.org/", "title": "Ethereum project site",
         "text": "Ethereum is a programmable blockchain platform. Its native token ether secures the network via proof-of-stake staking. The roadmap centers on scaling through rollups and data-availability sampling."},
        {"url": "https://github.example.com/ethereum/execution-specs", "title": "Execution specs repository",
         "text": "Reference implementation of the execution layer. Active development with weekly merges from dozens of contributors across independent client teams."},
        {"url": "https://papers.example.net/ethereum-whitepaper", "title": "Whitepaper mirror",
         "text": "The original whitepaper describes a next-generation smart contract and decentralized application platform with a Turing-complete virtual machine."},
        {"url": "https://ethereum.example.org/", "title": "Ethereum project site (duplicate)",
         "text": "Duplicate crawl of the project site."},
        {"url": "https://research.example.io/eth-tokenomics", "title": "Ether issuance analysis",
         "text": "Post-merge issuance is roughly 0.5% annually, offset by fee burning; supply has been near-flat. Validator staking yields float around 3%."},
    ]
    store.save("search", {"op": "search", "query": "Ethereum"}, ethereum_docs)
    bitcoin_docs = [
        {"url": "https://bitcoin.example.org/", "title": "Bitcoin project site",
         "text": "Bitcoin is a peer-to-peer electronic cash system with a fixed supply of 21 million coins secured by proof-of-work mining."},
        {"url": "https://papers.example.net/bitcoin-whitepaper", "title": "Whitepaper mirror",
         "text": "The whitepaper proposes a chain of hash-based proof-of-work that timestamps transactions without a trusted third party."},
        {"url": "https://github.example.com/bitcoin/bitcoin", "title": "Reference client repository",
         "text": "The reference client. Long-lived open-source project with a conservative review culture and hundreds of maintainers and contributors over time."},
    ]
    store.save("search", {"op": "search", "query": "Bitcoin"}, bitcoin_docs)
    store.save("search", {"op": "search", "query": "Unknownium"}, [])

    count = sum(1 for _ in ROOT.rglob("*.json"))
    print(f"wrote {count} fixture files under {ROOT}")


if __name__ == "__main__":
    main()
