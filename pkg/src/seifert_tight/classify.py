"""Decision pipeline: does a Seifert fibered space carry a positive tight
contact structure?

Every verdict records the ordered list of rules that fired.  Provenance
strings come from ``PROVENANCE``; their meaning is documented in the README.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cf import cf_expand
from .contact import (NO_TIGHT, TIGHT_BY_CITATION, TIGHT_WITH_CERTIFICATE,
                      Certificate, TightnessVerdict, check_certificate, tightness_criterion)
from .plumbing import PlumbingTree, StarShape, recognize_Mn, star_from_seifert
from .seifert import SeifertInvariants, euler_number, normalize, realizable

__all__ = [
    "ClassifierInput",
    "Report",
    "InternalCheckError",
    "PROVENANCE",
    "classify",
    "verify_certificate",
    "seifert_from_tree",
]

SCHEMA = 1

PROVENANCE = (
    "elementary",                   # not e0 = -1 with three fibers over S^2, or e <= 0
    "legendrian-surgery",           # a1 >= 3 or b1 != k + 2
    "transverse",                   # realizable triple
    "criterion-a",                  # embedding criterion, first leg longer than one
    "criterion-b",                  # embedding criterion, first leg [2]
    "torus-knot-surgery",           # c1 != 2s + 5
    "rational-torus-knot-surgery",  # truncation lands on some M_n but Y is not M_n
    "no-tight",                     # Y is M_n
)


class InternalCheckError(RuntimeError):
    """A guarantee the pipeline relies on failed on this instance."""


@dataclass(frozen=True)
class ClassifierInput:
    """Either Seifert invariants over a base surface, or a plumbing tree."""

    seifert: Optional[SeifertInvariants] = None
    tree: Optional[PlumbingTree] = None
    base_genus: int = 0
    base_orientable: bool = True

    def __post_init__(self):
        if (self.seifert is None) == (self.tree is None):
            raise ValueError("give exactly one of seifert invariants or a tree")
        if self.base_genus < 0:
            raise ValueError("base genus must be >= 0")
        if self.tree is not None and (self.base_genus, self.base_orientable) != (0, True):
            raise ValueError("tree input always describes a space over S^2")

    @property
    def base_is_sphere(self) -> bool:
        return self.base_genus == 0 and self.base_orientable

    def to_json(self) -> dict:
        if self.tree is not None:
            return {"tree": self.tree.to_json()}
        return {"base": {"genus": self.base_genus, "orientable": self.base_orientable},
                "seifert": self.seifert.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "ClassifierInput":
        if not isinstance(data, dict):
            raise ValueError("input must be a JSON object")
        if "tree" in data:
            return cls(tree=PlumbingTree.from_json(data["tree"]))
        if "seifert" in data:
            base = data.get("base", {})
            return cls(seifert=SeifertInvariants.from_json(data["seifert"]),
                       base_genus=int(base.get("genus", 0)),
                       base_orientable=bool(base.get("orientable", True)))
        raise ValueError("input needs a 'seifert' or a 'tree' entry")


@dataclass
class Report:
    input: dict
    normalized: Optional[SeifertInvariants]
    trace: list
    verdict: TightnessVerdict
    certified: Optional[StarShape] = None

    @property
    def outcome(self) -> str:
        return self.verdict.outcome

    @property
    def certificate(self) -> Optional[Certificate]:
        return self.verdict.certificate

    def to_json(self) -> dict:
        cert = self.certificate
        return {"schema": SCHEMA,
                "input": self.input,
                "normalized": self.normalized.to_json() if self.normalized else None,
                "trace": [dict(step) for step in self.trace],
                "verdict": self.verdict.to_json(),
                "certificate": cert.to_json() if cert else None}

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        v = data["verdict"]
        cert = Certificate.from_json(data["certificate"]) if data.get("certificate") else None
        verdict = TightnessVerdict(v["outcome"], v["provenance"], cert, v.get("n"),
                                   list(v.get("diagnostics", [])))
        norm = data.get("normalized")
        si = SeifertInvariants(int(norm["e0"]), tuple(Fraction(r) for r in norm["ratios"])) \
            if norm else None
        return cls(data["input"], si, [dict(s) for s in data["trace"]], verdict,
                   cert.gamma if cert else None)


def _leg_value(leg) -> Fraction:
    """``[-w1, ..., -wn]`` for arbitrary integer weights."""
    val = None
    for w in reversed(leg):
        if val is None:
            val = Fraction(-w)
        else:
            if val == 0:
                raise ValueError(f"leg {list(leg)} is degenerate (blows down to a 0-framed leaf)")
            val = -w - 1 / val
    if val == 0:
        raise ValueError(f"leg {list(leg)} is degenerate (blows down to a 0-framed leaf)")
    return val


def seifert_from_tree(tree: PlumbingTree) -> SeifertInvariants:
    """Normalized invariants of the boundary of a star-shaped plumbing."""
    shape = tree.star_shape()
    return normalize(shape.center_weight, [1 / _leg_value(leg) for leg in shape.legs])


def _step(trace, rule, detail):
    trace.append({"rule": rule, "detail": detail})


def _verdict(outcome, provenance, **kw) -> TightnessVerdict:
    return TightnessVerdict(outcome, provenance, **kw)


def classify(inp: ClassifierInput) -> Report:
    trace = []
    if inp.tree is not None:
        si = seifert_from_tree(inp.tree)
        _step(trace, "input", f"star-shaped tree with boundary {si}")
    else:
        si = inp.seifert
        _step(trace, "input", f"{si} over base of genus {inp.base_genus}"
              f"{'' if inp.base_orientable else ' (non-orientable)'}")

    def done(verdict, certified=None):
        return Report(inp.to_json(), si, trace, verdict, certified)

    if not inp.base_is_sphere:
        _step(trace, "elementary", "base orbifold is not S^2")
        return done(_verdict(TIGHT_BY_CITATION, "elementary"))
    if si.e0 != -1:
        _step(trace, "elementary", f"e0 = {si.e0} != -1")
        return done(_verdict(TIGHT_BY_CITATION, "elementary"))
    if si.k <= 2:
        _step(trace, "elementary", f"{si.k} singular fibres: lens space")
        return done(_verdict(TIGHT_BY_CITATION, "elementary"))
    if si.k >= 4:
        _step(trace, "elementary", f"{si.k} singular fibres")
        return done(_verdict(TIGHT_BY_CITATION, "elementary"))
    e = euler_number(si)
    if e <= 0:
        _step(trace, "elementary", f"rational Euler number {e} <= 0")
        return done(_verdict(TIGHT_BY_CITATION, "elementary"))

    a, b, c = (cf_expand(1 / r) for r in si.ratios)
    k = 0
    while k < len(a) and a[k] == 2:
        k += 1
    _step(trace, "expand", f"legs a={list(a)} b={list(b)} c={list(c)}, k={k}")
    if a[0] >= 3:
        _step(trace, "legendrian-surgery", f"a1 = {a[0]} >= 3")
        return done(_verdict(TIGHT_BY_CITATION, "legendrian-surgery"))
    if b[0] != k + 2:
        _step(trace, "legendrian-surgery", f"b1 = {b[0]} != k + 2 = {k + 2}")
        return done(_verdict(TIGHT_BY_CITATION, "legendrian-surgery"))

    w = realizable(si)
    if w is not None:
        _step(trace, "transverse", f"realizable with (m, a) = ({w.m}, {w.a})")
        return done(_verdict(TIGHT_BY_CITATION, "transverse"))

    shape = star_from_seifert(si)
    trunc = shape.truncate_third_leg()
    si_t = trunc.seifert()
    if realizable(si_t) is not None or euler_number(si_t) <= 0:
        raise InternalCheckError(f"truncation of {si} is realizable or has e <= 0")
    truncated = trunc != shape
    if truncated:
        _step(trace, "truncate", f"third leg cut to [{c[0]}]: {si_t}")

    if len(a) > 1:
        return _run_criterion(trunc, "A", "criterion-a", shape, trace, done)

    s = 0
    while 1 + s < len(b) and b[1 + s] == 2:
        s += 1
    if c[0] != 2 * s + 5:
        _step(trace, "torus-knot-surgery", f"c1 = {c[0]} != 2s + 5 = {2 * s + 5}")
        return done(_verdict(TIGHT_BY_CITATION, "torus-knot-surgery"))
    n = recognize_Mn(trunc)
    if n is not None:
        if not truncated:
            _step(trace, "no-tight", f"Y is M_{n}")
            return done(_verdict(NO_TIGHT, "no-tight", mn_index=n))
        _step(trace, "rational-torus-knot-surgery",
              f"truncation is M_{n}, third leg of Y is longer")
        return done(_verdict(TIGHT_BY_CITATION, "rational-torus-knot-surgery"))
    reduced = StarShape(-1, trunc.legs[:1] + (trunc.legs[1][:s + 2],) + trunc.legs[2:])
    if reduced != trunc:
        _step(trace, "reduce", f"second leg cut to {list(b[:s + 2])}")
    return _run_criterion(reduced, "B", "criterion-b", shape, trace, done)


def _run_criterion(gamma, family, provenance, shape, trace, done):
    verdict = tightness_criterion(gamma, family)
    if verdict.outcome != TIGHT_WITH_CERTIFICATE:
        _step(trace, provenance, "criterion failed: " + "; ".join(verdict.diagnostics))
        return done(verdict)
    if gamma == shape:
        _step(trace, provenance, f"certificate found, d3 = {verdict.certificate.d3}")
        return done(verdict, gamma)
    _step(trace, provenance, f"certificate for {gamma.seifert()}, d3 = {verdict.certificate.d3}; "
          "Y follows by Legendrian surgery on the erased leg vertices")
    return done(_verdict(TIGHT_BY_CITATION, provenance, certificate=verdict.certificate), gamma)


def _is_leg_prefix(small: StarShape, big: StarShape) -> bool:
    return (small.center_weight == big.center_weight and len(small.legs) == len(big.legs)
            and all(len(s) <= len(t) and tuple(t[:len(s)]) == tuple(s)
                    for s, t in zip(small.legs, big.legs)))


def verify_certificate(report: Report) -> bool:
    return not certificate_problems(report)


def certificate_problems(report: Report) -> list[str]:
    """Re-check a report's certificate without re-running any search."""
    cert = report.certificate
    if cert is None:
        return ["report carries no certificate"]
    if report.outcome not in (TIGHT_WITH_CERTIFICATE, TIGHT_BY_CITATION):
        return [f"certificate attached to a {report.outcome} verdict"]
    if report.normalized is None:
        return ["report has no normalized invariants"]
    try:
        full = star_from_seifert(report.normalized)
    except ValueError as exc:
        return [f"normalized invariants are malformed: {exc}"]
    if report.outcome == TIGHT_WITH_CERTIFICATE and cert.gamma != full:
        return ["certified tree is not the tree of Y"]
    if not _is_leg_prefix(cert.gamma, full):
        return ["certified tree is not obtained from Y by erasing leg ends"]
    try:
        return check_certificate(cert)
    except (ValueError, KeyError, IndexError) as exc:
        return [f"malformed certificate: {exc}"]
