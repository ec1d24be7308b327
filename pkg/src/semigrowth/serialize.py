"""JSON instance files and report files.

Rationals are written as JSON integers when integral and as ``"p/q"``
strings otherwise; floats are rejected on input so nothing is rounded.

Instance kinds::

    {"kind": "matrix_set", "dim": 2, "matrices": [[[1, 1], [0, 1]]], "labels": ["U"]}
    {"kind": "linrep", "alphabet_size": 2, "dim": 2, "w": [0, 1],
     "matrices": [...], "v": [1, 0], "alphabet": ["0", "1"]}
    {"kind": "dfao", "states": 2, "initial": 0, "alphabet": ["0", "1"],
     "transitions": [[0, 1], [1, 0]], "output": [0, 1]}
"""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .growth import Filtration, GeneratorSet, GrowthReport, MnTable, Verdict
from .linalg import Matrix, Subspace
from .polynomial import Polynomial, _q
from .regseq import Dfao, LinRep, SeqGrowthReport, SeqVerdict, format_word
from .tameness import is_tame_matrix

INSTANCE_KINDS = ("matrix_set", "linrep", "dfao")


class InstanceError(ValueError):
    """Malformed instance file; ``line``/``column`` locate the problem when known."""

    def __init__(self, msg: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.column = column


def rat_to_json(x):
    x = _q(x)
    return x if isinstance(x, int) else f"{x.numerator}/{x.denominator}"


def rat_from_json(x):
    if isinstance(x, bool):
        raise ValueError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return _q(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse rational {x!r}") from None
    raise ValueError(f"expected an integer or a \"p/q\" string, got {x!r}")


def _matrix_json(a: Matrix):
    return [[rat_to_json(x) for x in a.row(i)] for i in range(a.rows)]


def _locate(text: str, key: str):
    pos = text.find(f'"{key}"')
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _field(data: dict, key: str, text: str):
    if key not in data:
        raise InstanceError(f"missing required field {key!r}", 1, 1)
    return data[key]


def _rats(values, key, text):
    try:
        return [rat_from_json(x) for x in values]
    except (ValueError, TypeError) as exc:
        raise InstanceError(f"field {key!r}: {exc}", *_locate(text, key)) from None


def _matrices(values, key, text, dim=None):
    try:
        mats = [Matrix([[rat_from_json(x) for x in row] for row in m]) for m in values]
    except (ValueError, TypeError) as exc:
        raise InstanceError(f"field {key!r}: {exc}", *_locate(text, key)) from None
    for i, m in enumerate(mats, start=1):
        if dim is not None and m.shape != (dim, dim):
            raise InstanceError(f"field {key!r}: matrix {i} has shape {m.shape}, expected {(dim, dim)}",
                                *_locate(text, key))
    return mats


def parse_instance(text: str):
    """Parse an instance file; returns a GeneratorSet, LinRep or Dfao."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object", 1, 1)
    kind = data.get("kind")
    if kind not in INSTANCE_KINDS:
        raise InstanceError(f"unknown kind {kind!r}; expected one of {INSTANCE_KINDS}", *_locate(text, "kind"))
    try:
        if kind == "matrix_set":
            dim = data.get("dim")
            mats = _matrices(_field(data, "matrices", text), "matrices", text, dim)
            if not mats:
                raise InstanceError("field 'matrices' is empty", *_locate(text, "matrices"))
            labels = data.get("labels")
            return GeneratorSet(tuple(mats), tuple(labels) if labels else None)
        if kind == "linrep":
            dim = data.get("dim")
            mats = _matrices(_field(data, "matrices", text), "matrices", text, dim)
            size = data.get("alphabet_size")
            if size is not None and size != len(mats):
                raise InstanceError(f"alphabet_size {size} but {len(mats)} matrices", *_locate(text, "alphabet_size"))
            w = _rats(_field(data, "w", text), "w", text)
            v = _rats(_field(data, "v", text), "v", text)
            alph = data.get("alphabet")
            return LinRep(tuple(w), tuple(mats), tuple(v), tuple(alph) if alph else None)
        # dfao
        alph = data.get("alphabet")
        return Dfao(states=_field(data, "states", text), initial=data.get("initial", 0),
                    transitions=_field(data, "transitions", text),
                    output=_rats(_field(data, "output", text), "output", text),
                    alphabet=tuple(alph) if alph else None)
    except InstanceError:
        raise
    except (ValueError, TypeError) as exc:
        raise InstanceError(str(exc), 1, 1) from None


def instance_to_dict(obj) -> dict:
    if isinstance(obj, GeneratorSet):
        out = {"kind": "matrix_set", "dim": obj.d, "matrices": [_matrix_json(a) for a in obj.matrices]}
        if obj.labels:
            out["labels"] = list(obj.labels)
        return out
    if isinstance(obj, LinRep):
        out = {"kind": "linrep", "alphabet_size": obj.m, "dim": obj.d,
               "w": [rat_to_json(x) for x in obj.w],
               "matrices": [_matrix_json(a) for a in obj.matrices],
               "v": [rat_to_json(x) for x in obj.v]}
        if obj.alphabet:
            out["alphabet"] = list(obj.alphabet)
        return out
    if isinstance(obj, Dfao):
        out = {"kind": "dfao", "states": obj.states, "initial": obj.initial,
               "transitions": [list(t) for t in obj.transitions],
               "output": [rat_to_json(x) for x in obj.output]}
        if obj.alphabet:
            out["alphabet"] = list(obj.alphabet)
        return out
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _fmt(x, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_fmt(x[k], indent + 1)}" for k in sorted(x)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(x, list):
        if all(not isinstance(e, (dict, list)) for e in x):
            return json.dumps(x)
        return "[\n" + ",\n".join(pad + _fmt(e, indent + 1) for e in x) + "\n" + "  " * indent + "]"
    return json.dumps(x)


def dumps(data: dict) -> str:
    """Deterministic JSON text: sorted keys, flat lists kept on one line."""
    return _fmt(data, 0) + "\n"


# --- reports -------------------------------------------------------------

def _float(x):
    if x is None or not math.isfinite(x):
        return None
    return x


def growth_report_to_dict(r: GrowthReport, reproducible: bool = False) -> dict:
    f = r.filtration
    t = r.mn_table
    if r.verdict is Verdict.POLYNOMIAL:
        degree: Any = r.degree
    elif r.verdict is Verdict.EXPONENTIAL:
        degree = "inf"
    else:
        degree = None
    out = {
        "kind": "growth_report",
        "tool": "semigrowth",
        "version": __version__,
        "verdict": r.verdict.value,
        "degree": degree,
        "spectral_radius": r.spectral_radius,
        "certificates": {
            "witness_word": format_word(r.witness_word) if r.witness_word is not None else None,
            "witness_symbols": list(r.witness_word) if r.witness_word is not None else None,
            "witness_charpoly": [rat_to_json(c) for c in r.witness_charpoly.coeffs]
            if r.witness_charpoly is not None else None,
            "a": f.a if f else None,
            "k": f.k if f else None,
            "filtration_dims": list(f.dims) if f else None,
            "filtration_bases": [[[rat_to_json(x) for x in b] for b in s.basis] for s in f.chain] if f else None,
            "quotient_sizes": list(f.quotient_sizes) if f else None,
            "word_lengths": list(f.word_lengths) if f else None,
        },
        "mn_table": None if t is None else {
            "norm": t.norm_kind,
            "values": [rat_to_json(x) for x in t.values],
            "frontier": list(t.frontier_sizes),
            "truncated_at": t.truncated_at,
        },
        "empirical": {
            "slope": _float(r.empirical_slope),
            "fit_range": list(r.fit_range) if r.fit_range else None,
            "c1": rat_to_json(r.c1) if r.c1 is not None else None,
            "c2": rat_to_json(r.c2) if r.c2 is not None else None,
        },
        "exhausted_budget": r.exhausted_budget,
        "budgets": dict(r.budgets),
    }
    if not reproducible:
        out["timestamp"] = datetime.now(timezone.utc).isoformat()
    return out


def growth_report_from_dict(data: dict) -> GrowthReport:
    cert = data["certificates"]
    verdict = Verdict(data["verdict"])
    filt = None
    if cert.get("filtration_bases") is not None:
        d = cert["filtration_dims"][0]
        chain = tuple(Subspace(d, [[rat_from_json(x) for x in b] for b in basis])
                      for basis in cert["filtration_bases"])
        filt = Filtration(a=cert["a"], chain=chain, quotient_sizes=tuple(cert["quotient_sizes"]),
                          word_lengths=tuple(cert["word_lengths"] or ()))
    t = data.get("mn_table")
    table = None if t is None else MnTable(t["norm"], tuple(rat_from_json(x) for x in t["values"]),
                                           tuple(t["frontier"]), t["truncated_at"])
    emp = data["empirical"]
    ww = cert.get("witness_symbols")
    return GrowthReport(
        verdict=verdict,
        degree=data["degree"] if isinstance(data["degree"], int) else None,
        filtration=filt,
        witness_word=None if ww is None else tuple(ww),
        witness_charpoly=None if cert.get("witness_charpoly") is None
        else Polynomial(rat_from_json(c) for c in cert["witness_charpoly"]),
        mn_table=table,
        empirical_slope=emp["slope"],
        fit_range=tuple(emp["fit_range"]) if emp["fit_range"] else None,
        c1=None if emp["c1"] is None else rat_from_json(emp["c1"]),
        c2=None if emp["c2"] is None else rat_from_json(emp["c2"]),
        exhausted_budget=data.get("exhausted_budget"),
        budgets=dict(data.get("budgets", {})),
    )


def seq_report_to_dict(r: SeqGrowthReport, reproducible: bool = False) -> dict:
    out = {
        "kind": "seq_growth_report",
        "tool": "semigrowth",
        "version": __version__,
        "verdict": r.verdict.value,
        "grdeg": r.grdeg if r.verdict is SeqVerdict.FINITE_DEGREE
        else ("inf" if r.verdict is SeqVerdict.INFINITE else None),
        "in_R0": r.in_r0,
        "minimized_dim": r.minimized_dim,
        "max_table": [rat_to_json(x) for x in r.max_table],
        "empirical": {
            "slope": _float(r.empirical_slope),
            "fit_range": list(r.fit_range) if r.fit_range else None,
            "bound_c": rat_to_json(r.bound_c) if r.bound_c is not None else None,
        },
        "growth": growth_report_to_dict(r.growth, reproducible=True) if r.growth else None,
    }
    if not reproducible:
        out["timestamp"] = datetime.now(timezone.utc).isoformat()
    return out


def seq_report_from_dict(data: dict) -> SeqGrowthReport:
    emp = data["empirical"]
    verdict = SeqVerdict(data["verdict"])
    return SeqGrowthReport(
        verdict=verdict,
        grdeg=data["grdeg"] if isinstance(data["grdeg"], int) else None,
        in_r0=data["in_R0"],
        minimized_dim=data["minimized_dim"],
        growth=growth_report_from_dict(data["growth"]) if data.get("growth") else None,
        max_table=tuple(rat_from_json(x) for x in data["max_table"]),
        empirical_slope=emp["slope"],
        fit_range=tuple(emp["fit_range"]) if emp["fit_range"] else None,
        bound_c=None if emp["bound_c"] is None else rat_from_json(emp["bound_c"]),
    )


def verify_report(data: dict, gens: GeneratorSet) -> list[str]:
    """Re-derive a report's verdict from its own certificates.

    Returns a list of problems; empty means the report is self-consistent.
    """
    problems = []
    cert = data["certificates"]
    verdict = data["verdict"]
    if verdict == "Exponential":
        ww = cert.get("witness_symbols")
        if ww is None:
            problems.append("exponential verdict without witness word")
        elif any(not 1 <= s <= gens.m for s in ww):
            problems.append(f"witness word {ww} uses symbols outside 1..{gens.m}")
        elif is_tame_matrix(gens.product(tuple(ww)), gens.d):
            problems.append(f"witness word {format_word(ww)} multiplies to a tame matrix")
        if data["degree"] != "inf":
            problems.append("exponential verdict must report degree 'inf'")
    elif verdict == "Polynomial":
        dims = cert.get("filtration_dims")
        if not dims:
            problems.append("polynomial verdict without filtration")
        else:
            if dims[0] != gens.d or dims[-1] != 0:
                problems.append(f"filtration dims {dims} do not run from {gens.d} to 0")
            if any(a <= b for a, b in zip(dims, dims[1:])):
                problems.append(f"filtration dims {dims} are not strictly decreasing")
            if data["degree"] != len(dims) - 2:
                problems.append(f"degree {data['degree']} != chain length {len(dims) - 1} - 1")
            if cert.get("k") != len(dims) - 1:
                problems.append("k does not match the chain length")
    return problems
