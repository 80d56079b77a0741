"""Command-line interface and the JSON instance format.

Instance document (``schema_version`` "1")::

    {
      "schema_version": "1",
      "items": 3,                      # or a list of item names
      "label": "optional", "source": "optional",
      "bidders": [
        {"kind": "budgeted_additive", "prices": [2, 2, 4], "budget": 4},
        {"kind": "table", "values": [{"set": [0, 1], "value": "7/2"}]},
        {"kind": "expression", "expr": {"or": [{"bid": [0, 2]}, {"bid": [1, 3]}]}}
      ]
    }

Money is an integer or a ``"p/q"`` string.  Items are referenced by index,
or by name when ``items`` is a list of names.  Sparse tables give each
unlisted bundle the largest value listed for one of its subsets;
``--strict-table`` demands all 2^m entries instead.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from .algebra import (
    Bid,
    ExpressionValuation,
    Or,
    XosExpression,
    XosValuation,
    dedupe_clauses,
    expression_valuation,
    or_of,
    sm_to_xos,
    xor_of,
)
from .allocation import (
    Allocation,
    AscendingResult,
    AuctionInstance,
    WalrasianCertificate,
    exists_walrasian,
    greedy_allocate,
    greedy_order_heuristic,
    kelso_crawford,
    optimal_allocate,
    oxs_matching_allocate,
    verify_walrasian,
)
from .core import (
    ItemSet,
    PriceVector,
    TableValuation,
    Valuation,
    build_valuation,
    check_enumerable,
    format_money,
    single_minded,
    submasks,
    to_money,
)
from .errors import ParseError, SchemaError, SubauctError, ValuationError
from .hierarchy import (
    ComplementarityWitness,
    ExchangeWitness,
    PriceWitness,
    SubmodularityWitness,
    classify,
    is_submodular,
)
from .mechanisms import false_name_analysis, vcg

SCHEMA_VERSION = "1"

_KIND_FIELDS = {
    "table": {"values"},
    "singleton": {"item", "price"},
    "single_minded": {"bundle", "price"},
    "additive": {"prices"},
    "unit_demand": {"prices"},
    "budgeted_additive": {"prices", "budget"},
    "symmetric": {"marginals"},
    "coverage": {"regions"},
    "expression": {"expr"},
    "xos": {"clauses"},
}
_OPTIONAL_FIELDS = {"coverage": {"weights"}}
_BIDDER_META = {"kind", "name", "role"}


class Instance:
    """A parsed document: the auction plus item and bidder names."""

    def __init__(self, auction: AuctionInstance, item_names: list[str] | None,
                 bidder_names: list[str], roles: list[str | None], meta: dict, extra: dict):
        self.auction = auction
        self.item_names = item_names
        self.bidder_names = bidder_names
        self.roles = roles
        self.meta = meta
        self.extra = extra

    def item_label(self, i: int):
        return self.item_names[i] if self.item_names else i

    def bundle(self, S: ItemSet) -> list:
        return [self.item_label(i) for i in S]


# ---------------------------------------------------------------------------
# parsing


class _Reader:
    def __init__(self, m: int, names: list[str] | None, strict: bool):
        self.m = m
        self.names = names
        self.index = {n: i for i, n in enumerate(names)} if names else {}
        self.strict = strict

    def money(self, raw, path: str, signed: bool = False) -> Fraction:
        if isinstance(raw, float):
            raise SchemaError(f"{path}: use an integer or a 'p/q' string, not a float")
        try:
            return to_money(raw, signed=signed)
        except ValuationError as exc:
            raise ValuationError(f"{path}: {exc}") from None
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: {exc}") from None

    def item(self, raw, path: str) -> int:
        if isinstance(raw, str) and raw in self.index:
            return self.index[raw]
        if isinstance(raw, int) and not isinstance(raw, bool) and 0 <= raw < self.m:
            return raw
        raise SchemaError(f"{path}: unknown item {raw!r}")

    def items(self, raw, path: str) -> int:
        if not isinstance(raw, list):
            raise SchemaError(f"{path}: expected a list of items")
        mask = 0
        for k, x in enumerate(raw):
            mask |= 1 << self.item(x, f"{path}[{k}]")
        return mask

    def money_list(self, raw, path: str, length: int | None = None) -> list[Fraction]:
        if not isinstance(raw, list):
            raise SchemaError(f"{path}: expected a list")
        if length is not None and len(raw) != length:
            raise SchemaError(f"{path}: expected {length} entries, got {len(raw)}")
        return [self.money(x, f"{path}[{k}]") for k, x in enumerate(raw)]

    def table(self, raw, path: str) -> TableValuation:
        m = self.m
        check_enumerable(m, "table valuation")
        size = 1 << m
        if isinstance(raw, list) and all(not isinstance(x, dict) for x in raw):
            return TableValuation(m, self.money_list(raw, path, size))
        if not isinstance(raw, list):
            raise SchemaError(f"{path}: expected a list")
        listed: dict[int, Fraction] = {}
        for k, entry in enumerate(raw):
            p = f"{path}[{k}]"
            if not isinstance(entry, dict) or "value" not in entry or len({"set", "mask"} & entry.keys()) != 1:
                raise SchemaError(f"{p}: expected {{'set': [...], 'value': q}} or {{'mask': n, 'value': q}}")
            if "mask" in entry:
                mask = entry["mask"]
                if not isinstance(mask, int) or not 0 <= mask < size:
                    raise SchemaError(f"{p}.mask: not a bundle of {m} items")
            else:
                mask = self.items(entry["set"], f"{p}.set")
            if mask in listed:
                raise SchemaError(f"{p}: bundle listed twice")
            listed[mask] = self.money(entry["value"], f"{p}.value")
        if listed.get(0, 0) != 0:
            raise ValuationError(f"{path}: the empty bundle must be worth 0")
        if self.strict and len(listed.keys() | {0}) < size:
            raise SchemaError(f"{path}: strict tables need all {size} bundles, got {len(listed)}")
        values = [Fraction(0)] * size
        for mask in range(size):
            values[mask] = max((listed[s] for s in submasks(mask) if s in listed), default=Fraction(0))
            if mask in listed and listed[mask] < values[mask]:
                raise ValuationError(f"{path}: listed value for mask {mask} is below one of its subsets")
        return TableValuation(m, values)

    def expr(self, raw, path: str):
        if not isinstance(raw, dict) or len(raw) != 1:
            raise SchemaError(f"{path}: expected one of {{'bid': [item, price]}}, {{'or': [...]}}, {{'xor': [...]}}")
        (tag, body), = raw.items()
        if tag == "bid":
            if not isinstance(body, list) or len(body) != 2:
                raise SchemaError(f"{path}.bid: expected [item, price]")
            return Bid(self.item(body[0], f"{path}.bid[0]"), self.money(body[1], f"{path}.bid[1]"))
        if tag in ("or", "xor"):
            if not isinstance(body, list) or not body:
                raise SchemaError(f"{path}.{tag}: expected a nonempty list")
            kids = [self.expr(c, f"{path}.{tag}[{k}]") for k, c in enumerate(body)]
            return or_of(kids) if tag == "or" else xor_of(kids)
        raise SchemaError(f"{path}: unknown expression tag {tag!r}")

    def bidder(self, raw, path: str) -> Valuation:
        if not isinstance(raw, dict):
            raise SchemaError(f"{path}: expected an object")
        kind = raw.get("kind")
        if kind not in _KIND_FIELDS:
            raise SchemaError(f"{path}.kind: unknown valuation kind {kind!r}")
        need = _KIND_FIELDS[kind]
        allowed = need | _OPTIONAL_FIELDS.get(kind, set()) | _BIDDER_META
        missing = need - raw.keys()
        if missing:
            raise SchemaError(f"{path}: {kind} bidder missing {sorted(missing)}")
        unknown = raw.keys() - allowed
        if unknown:
            raise SchemaError(f"{path}: unknown fields {sorted(unknown)} for kind {kind}")
        m = self.m
        try:
            if kind == "table":
                return self.table(raw["values"], f"{path}.values")
            if kind == "singleton":
                return build_valuation("singleton", m=m, item=self.item(raw["item"], f"{path}.item"),
                                       price=self.money(raw["price"], f"{path}.price"))
            if kind == "single_minded":
                bundle = self.items(raw["bundle"], f"{path}.bundle")
                return single_minded(m, [i for i in range(m) if bundle >> i & 1], self.money(raw["price"], f"{path}.price"))
            if kind in ("additive", "unit_demand"):
                return build_valuation(kind, prices=self.money_list(raw["prices"], f"{path}.prices", m))
            if kind == "budgeted_additive":
                return build_valuation(kind, prices=self.money_list(raw["prices"], f"{path}.prices", m),
                                       budget=self.money(raw["budget"], f"{path}.budget"))
            if kind == "symmetric":
                return build_valuation(kind, marginals=self.money_list(raw["marginals"], f"{path}.marginals", m))
            if kind == "coverage":
                regions = raw["regions"]
                if not isinstance(regions, list) or len(regions) != m or not all(isinstance(r, list) for r in regions):
                    raise SchemaError(f"{path}.regions: expected one list of elements per item")
                weights = raw.get("weights") or {}
                if not isinstance(weights, dict):
                    raise SchemaError(f"{path}.weights: expected an object")
                weights = {k: self.money(w, f"{path}.weights.{k}") for k, w in weights.items()}
                return build_valuation(kind, regions=regions, weights=weights)
            if kind == "expression":
                return expression_valuation(self.expr(raw["expr"], f"{path}.expr"), m)
            clauses = raw["clauses"]
            if not isinstance(clauses, list) or not clauses:
                raise SchemaError(f"{path}.clauses: expected a nonempty list")
            return XosValuation(XosExpression(tuple(
                tuple(self.money_list(c, f"{path}.clauses[{k}]", m)) for k, c in enumerate(clauses))))
        except SchemaError:
            raise
        except ValuationError as exc:
            msg = str(exc)
            if not msg.startswith(path):
                exc.args = (f"{path}: {msg}",)
            raise exc from None


def parse_instance(document: bytes | str, *, strict_table: bool = False) -> Instance:
    """Parse a JSON instance document (see the module docstring)."""
    try:
        text = document.decode("utf-8") if isinstance(document, bytes) else document
        data = json.loads(text)
    except UnicodeDecodeError as exc:
        raise ParseError(f"instance is not UTF-8: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_document(data, strict_table=strict_table)


def parse_document(data: Any, *, strict_table: bool = False) -> Instance:
    if not isinstance(data, dict):
        raise SchemaError("$: expected a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"$.schema_version: expected {SCHEMA_VERSION!r}, got {version!r}")
    items = data.get("items")
    if isinstance(items, int) and not isinstance(items, bool) and items >= 1:
        m, names = items, None
    elif isinstance(items, list) and items and all(isinstance(x, str) for x in items):
        if len(set(items)) != len(items):
            raise SchemaError("$.items: duplicate item names")
        m, names = len(items), list(items)
    else:
        raise SchemaError("$.items: expected a positive integer or a list of item names")
    bidders = data.get("bidders")
    if not isinstance(bidders, list) or not bidders:
        raise SchemaError("$.bidders: expected a nonempty list")
    reader = _Reader(m, names, strict_table)
    vals, bnames, roles = [], [], []
    for k, raw in enumerate(bidders):
        vals.append(reader.bidder(raw, f"$.bidders[{k}]"))
        bnames.append(str(raw.get("name", k)))
        role = raw.get("role")
        if role not in (None, "split", "other"):
            raise SchemaError(f"$.bidders[{k}].role: expected 'split' or 'other'")
        roles.append(role)
    meta = {k: data[k] for k in ("label", "source") if k in data}
    extra = {}
    if "certificate" in data:
        extra["certificate"] = _parse_certificate(reader, data["certificate"], len(vals))
    known = {"schema_version", "items", "bidders", "label", "source", "certificate"}
    unknown = data.keys() - known
    if unknown:
        raise SchemaError(f"$: unknown fields {sorted(unknown)}")
    return Instance(AuctionInstance(vals), names, bnames, roles, meta, extra)


def _parse_certificate(reader: _Reader, raw, n: int) -> WalrasianCertificate:
    path = "$.certificate"
    if not isinstance(raw, dict) or {"prices", "bundles"} - raw.keys():
        raise SchemaError(f"{path}: expected {{'prices': [...], 'bundles': [[...], ...]}}")
    prices = PriceVector(reader.money_list(raw["prices"], f"{path}.prices", reader.m))
    bundles = raw["bundles"]
    if not isinstance(bundles, list) or len(bundles) != n:
        raise SchemaError(f"{path}.bundles: expected one bundle per bidder")
    masks = [reader.items(b, f"{path}.bundles[{k}]") for k, b in enumerate(bundles)]
    try:
        alloc = Allocation.from_masks(masks, reader.m)
    except ValueError as exc:
        raise SchemaError(f"{path}.bundles: {exc}") from None
    return WalrasianCertificate(prices, alloc)


# ---------------------------------------------------------------------------
# emission


def _emit_expr(e) -> dict:
    if isinstance(e, Bid):
        return {"bid": [e.item, format_money(e.price)]}
    tag = "or" if isinstance(e, Or) else "xor"
    return {tag: [_emit_expr(c) for c in e.children]}


def emit_valuation(v: Valuation) -> dict:
    """JSON form of one bidder; derived valuations are written as full tables."""
    money = format_money
    if isinstance(v, ExpressionValuation):
        return {"kind": "expression", "expr": _emit_expr(v.expr)}
    if isinstance(v, XosValuation):
        return {"kind": "xos", "clauses": [[money(p) for p in c] for c in v.expr.clauses]}
    kind = v.kind
    p = v.params()
    if kind == "singleton":
        return {"kind": kind, "item": p["item"], "price": money(p["price"])}
    if kind in ("additive", "unit_demand"):
        return {"kind": kind, "prices": [money(x) for x in p["prices"]]}
    if kind == "budgeted_additive":
        return {"kind": kind, "prices": [money(x) for x in p["prices"]], "budget": money(p["budget"])}
    if kind == "symmetric":
        return {"kind": kind, "marginals": [money(x) for x in p["marginals"]]}
    if kind == "coverage":
        # JSON keys are strings, so elements are written as strings throughout
        return {"kind": kind, "regions": [[str(e) for e in r] for r in p["regions"]],
                "weights": {str(k): money(w) for k, w in p["weights"].items()}}
    return {"kind": "table", "values": [money(x) for x in v.table()]}


def emit_instance(inst: AuctionInstance | Instance) -> dict:
    if isinstance(inst, Instance):
        auction, names, bnames = inst.auction, inst.item_names, inst.bidder_names
    else:
        auction, names, bnames = inst, None, None
    bidders = []
    for k, v in enumerate(auction.valuations):
        doc = emit_valuation(v)
        if bnames is not None and bnames[k] != str(k):
            doc["name"] = bnames[k]
        if isinstance(inst, Instance) and inst.roles[k]:
            doc["role"] = inst.roles[k]
        bidders.append(doc)
    return {"schema_version": SCHEMA_VERSION, "items": names or auction.m, "bidders": bidders}


# ---------------------------------------------------------------------------
# rendering


def _jsonable(x, inst: Instance | None = None):
    if isinstance(x, Fraction):
        return format_money(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, ItemSet):
        return inst.bundle(x) if inst else list(x)
    if isinstance(x, PriceVector):
        return [format_money(p) for p in x]
    if isinstance(x, SubmodularityWitness):
        A, B = x.sets
        return {"x": _jsonable(x.x if not inst else inst.item_label(x.x)),
                "y": _jsonable(x.y if not inst else inst.item_label(x.y)),
                "S": _jsonable(x.S, inst), "A": _jsonable(A, inst), "B": _jsonable(B, inst)}
    if isinstance(x, ExchangeWitness):
        return {"S": _jsonable(x.S, inst), "T": _jsonable(x.T, inst), "x": inst.item_label(x.x) if inst else x.x}
    if isinstance(x, ComplementarityWitness):
        return {"x": inst.item_label(x.x) if inst else x.x, "S": _jsonable(x.S, inst), "T": _jsonable(x.T, inst)}
    if isinstance(x, PriceWitness):
        return {"prices": _jsonable(x.prices), "bundle": _jsonable(x.A, inst), "better": _jsonable(x.D, inst)}
    if isinstance(x, dict):
        return {str(k): _jsonable(v, inst) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v, inst) for v in x]
    raise TypeError(f"cannot render {type(x).__name__}")


def render_text(obj, indent: int = 0) -> str:
    """Indented key/value text carrying the same values as the JSON report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# ---------------------------------------------------------------------------
# commands


def _allocation_doc(inst: Instance, alloc: Allocation) -> dict:
    return {inst.bidder_names[j]: inst.bundle(b) for j, b in enumerate(alloc.bundles)}


def cmd_classify(inst: Instance, args) -> tuple[dict, dict]:
    results, witnesses = {}, {}
    for name, v in zip(inst.bidder_names, inst.auction.valuations):
        rep = classify(v)
        results[name] = {**rep.verdicts, "minimal_a": rep.minimal_a, "consistent": rep.consistent()}
        if rep.witnesses:
            witnesses[name] = rep.witnesses
    return results, witnesses


def cmd_allocate(inst: Instance, args) -> tuple[dict, dict]:
    auction = inst.auction
    method = args.method
    extra: dict[str, Any] = {}
    if method == "optimal":
        alloc, value = optimal_allocate(auction)
    elif method == "greedy":
        alloc = greedy_allocate(auction)
        value = auction.value(alloc)
    elif method == "greedy-heuristic":
        alloc = greedy_allocate(auction, greedy_order_heuristic)
        value = auction.value(alloc)
    elif method == "kelso-crawford":
        if args.epsilon is None:
            raise SchemaError("--epsilon is required for the kelso-crawford method")
        try:
            eps = to_money(args.epsilon)
        except (TypeError, ValueError, ValuationError) as exc:
            raise SchemaError(f"--epsilon: {exc}") from None
        if eps <= 0:
            raise SchemaError("--epsilon must be positive")
        res: AscendingResult = kelso_crawford(auction, eps)
        alloc, value = res.allocation, res.welfare
        extra = {"prices": res.prices, "rounds": res.rounds,
                 "demanded": {inst.bidder_names[j]: inst.bundle(b) for j, b in enumerate(res.demanded)}}
    else:
        alloc, value = oxs_matching_allocate(auction)
        value = auction.value(alloc)
    results = {"method": method, "allocation": _allocation_doc(inst, alloc), "value": value, **extra}
    if args.audit:
        best = optimal_allocate(auction)[1]
        results["optimal_value"] = best
        results["ratio"] = value / best if best else Fraction(1)
    return results, {}


def cmd_vcg(inst: Instance, args) -> tuple[dict, dict]:
    out = vcg(inst.auction)
    names = inst.bidder_names
    return {
        "allocation": _allocation_doc(inst, out.allocation),
        "welfare": out.welfare,
        "payments": {names[j]: p for j, p in enumerate(out.payments)},
        "opponent_values": {names[j]: {"all_items": a, "without_own_bundle": b}
                            for j, (a, b) in enumerate(out.opponent_values)},
    }, {}


def cmd_false_name(inst: Instance, args) -> tuple[dict, dict]:
    n = inst.auction.n
    if args.split:
        try:
            split_idx = sorted({int(x) for x in args.split.split(",")})
        except ValueError:
            raise SchemaError("--split expects comma-separated bidder indices") from None
        if any(not 0 <= j < n for j in split_idx):
            raise SchemaError(f"--split index outside 0..{n - 1}")
    else:
        split_idx = [j for j, r in enumerate(inst.roles) if r == "split"]
    if not split_idx:
        raise SchemaError("no split identities: mark bidders with \"role\": \"split\" or pass --split")
    vals = inst.auction.valuations
    others = [v for j, v in enumerate(vals) if j not in split_idx]
    rep = false_name_analysis(others, [vals[j] for j in split_idx])
    return {
        "split_bidders": [inst.bidder_names[j] for j in split_idx],
        "honest_payment": rep.honest_payment,
        "split_payments": list(rep.split_payments),
        "total_split": rep.total_split,
        "honest_bundle": inst.bundle(rep.honest_bundle),
        "split_bundles": [inst.bundle(b) for b in rep.split_bundles],
        "honest_utility": rep.honest_utility,
        "split_utility": rep.split_utility,
        "profitable": rep.profitable,
        "others_combined_submodular": rep.others_combined_submodular,
    }, {}


def cmd_convert(inst: Instance, args) -> tuple[dict, dict]:
    results, witnesses = {}, {}
    for name, v in zip(inst.bidder_names, inst.auction.valuations):
        check = is_submodular(v)
        if not check:
            results[name] = {"verdict": False, "reason": "not submodular"}
            witnesses[name] = {"SM": check.witness}
            continue
        xos = sm_to_xos(v, check=False)
        if args.dedupe:
            xos = dedupe_clauses(xos)
        results[name] = {"verdict": True, "clause_count": len(xos.clauses),
                         "bidder": {"kind": "xos", "clauses": [list(c) for c in xos.clauses]}}
    return results, witnesses


def cmd_walras(inst: Instance, args) -> tuple[dict, dict]:
    cert = inst.extra.get("certificate")
    if cert is not None:
        check = verify_walrasian(inst.auction, cert)
        res = {"mode": "verify", "verdict": check.holds}
        wit = {}
        if not check.holds:
            j, better = check.witness
            wit = {"bidder": inst.bidder_names[j], "better_bundle": inst.bundle(better)}
        return res, wit
    found = exists_walrasian(inst.auction)
    if found is None:
        return {"mode": "search", "verdict": False}, {}
    return {"mode": "search", "verdict": True, "prices": found.prices,
            "allocation": _allocation_doc(inst, found.allocation)}, {}


def cmd_fixtures(args) -> tuple[dict, dict, int]:
    from .fixtures import run_fixtures

    results, failures = {}, {}
    for r in run_fixtures():
        results[r.name] = {"description": r.description, "passed": r.passed,
                           "checks": {c.label: "pass" if c.passed else "fail" for c in r.checks}}
        bad = [c for c in r.checks if not c.passed]
        if bad:
            failures[r.name] = {c.label: {"expected": c.expected, "actual": c.actual} for c in bad}
    return results, failures, 0 if not failures else 1


def cmd_demo(args) -> str:
    from .demo import narrate

    return narrate(seed=args.seed)


COMMANDS = {
    "classify": cmd_classify,
    "allocate": cmd_allocate,
    "vcg": cmd_vcg,
    "false-name": cmd_false_name,
    "convert": cmd_convert,
    "walras": cmd_walras,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="instance file (JSON); '-' or omitted reads stdin")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON report")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", help="text report (default)")
    common.add_argument("--strict-table", action="store_true", help="require every bundle in table valuations")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    common.add_argument("--seed", type=int, default=0, help="random seed for commands that sample")

    parser = argparse.ArgumentParser(prog="subauct", description="Combinatorial auction toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="class memberships of every bidder")
    p = sub.add_parser("allocate", parents=[common], help="compute an allocation")
    p.add_argument("--method", default="optimal",
                   choices=["optimal", "greedy", "greedy-heuristic", "kelso-crawford", "oxs-matching"])
    p.add_argument("--epsilon", help="price increment for kelso-crawford, e.g. 1/100")
    p.add_argument("--audit", action="store_true", help="also report the optimum and the ratio")
    sub.add_parser("vcg", parents=[common], help="VCG allocation and payments")
    p = sub.add_parser("false-name", parents=[common], help="compare a split bid with the merged bid")
    p.add_argument("--split", help="comma-separated indices of the split identities")
    p = sub.add_parser("convert", parents=[common], help="XOS form of submodular bidders")
    p.add_argument("--dedupe", action="store_true", help="drop repeated clauses")
    sub.add_parser("walras", parents=[common], help="find or verify a Walrasian equilibrium")
    sub.add_parser("fixtures", parents=[common], help="recompute the built-in examples")
    sub.add_parser("demo", parents=[common], help="narrated walk through the built-in examples")
    return parser


def _read_input(path: str | None) -> bytes:
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def run_command(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or "text"
    start = time.perf_counter()
    code = 0
    try:
        if args.command == "demo":
            text = cmd_demo(args)
            if fmt == "text":
                print(text, file=stdout)
                return 0
            report = {"command": "demo", "results": {"narrative": text.splitlines()}}
        elif args.command == "fixtures":
            results, witnesses, code = cmd_fixtures(args)
            report = {"command": "fixtures", "results": _jsonable(results), "witnesses": _jsonable(witnesses)}
        else:
            inst = parse_instance(_read_input(args.input), strict_table=args.strict_table)
            results, witnesses = COMMANDS[args.command](inst, args)
            report = {"command": args.command, "results": _jsonable(results, inst),
                      "witnesses": _jsonable(witnesses, inst)}
            if inst.meta:
                report["instance"] = inst.meta
    except SubauctError as exc:
        print(f"subauct: error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"subauct: error: {exc}", file=stderr)
        return 2
    if args.timing:
        report["timing"] = {"seconds": f"{time.perf_counter() - start:.6f}"}
    if fmt == "json":
        print(json.dumps(report, indent=2), file=stdout)
    else:
        print(render_text(report), file=stdout)
    return code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
