"""Contact surgery bookkeeping, d3 and the tightness certificate."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cf import as_fraction, cf_expand
from .embedding import (GAMMA, GAMMA_P, CharClassC, EmbeddingError, EmbeddingModel,
                        HomologyClass, build_class_c_A, build_class_c_B, embed_union,
                        family_a_parameters, family_b_parameters, restrict_square,
                        verify_char_and_signature)
from .lattice import FullPath, LatticeError, lattice_for
from .plumbing import StarShape, integer_det, signature
from .seifert import euler_number, realizable

__all__ = [
    "SurgeryPresentation",
    "TightnessVerdict",
    "Certificate",
    "rot_from_cusps",
    "expand_negative_contact_surgery",
    "d3_from_diagram",
    "d3_from_restriction",
    "presentation_from_values",
    "certify",
    "tightness_criterion",
    "check_certificate",
    "TIGHT_WITH_CERTIFICATE",
    "TIGHT_BY_CITATION",
    "NO_TIGHT",
    "INCONCLUSIVE",
]

TIGHT_WITH_CERTIFICATE = "TightWithCertificate"
TIGHT_BY_CITATION = "TightByCitation"
NO_TIGHT = "NoTight"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SurgeryPresentation:
    """Legendrian link with contact (+-1) coefficients.

    ``components`` holds ``(tb, rot, coeff)`` triples; ``linking`` is the
    smooth linking matrix whose diagonal must equal ``tb + coeff``.
    """

    components: tuple
    linking: tuple

    def __post_init__(self):
        comps = tuple((int(tb), int(rot), int(c)) for tb, rot, c in self.components)
        L = tuple(tuple(int(x) for x in row) for row in self.linking)
        n = len(comps)
        if len(L) != n or any(len(row) != n for row in L):
            raise ValueError("linking matrix size does not match the components")
        for i in range(n):
            if comps[i][2] not in (1, -1):
                raise ValueError("contact coefficients must be +1 or -1")
            if L[i][i] != comps[i][0] + comps[i][2]:
                raise ValueError(f"component {i}: framing {L[i][i]} != tb + coeff")
            for j in range(n):
                if L[i][j] != L[j][i]:
                    raise ValueError("linking matrix is not symmetric")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "linking", L)

    @property
    def plus_count(self) -> int:
        return sum(1 for _, _, c in self.components if c == 1)


def rot_from_cusps(up: int, down: int) -> int:
    """Rotation number of an oriented front: half of (down cusps - up cusps)."""
    if up < 0 or down < 0 or (up + down) % 2 or up + down < 2:
        raise ValueError(f"a closed front needs an even number >= 2 of cusps, got {up}+{down}")
    return (down - up) // 2


def expand_negative_contact_surgery(r) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Chain ``r = [x1, ..., xn]`` with all ``xi <= -2`` and the stabilization
    counts ``|xi + 2|`` of the corresponding (-1)-surgeries.

    Needs ``r < -1``; rationals in ``[-1, 0)`` have no such chain.
    """
    r = as_fraction(r)
    if r >= 0:
        raise ValueError(f"negative contact surgery needs r < 0, got {r}")
    if r >= -1:
        raise ValueError(f"r = {r} has no expansion with all terms <= -2")
    terms = tuple(-t for t in cf_expand(-r))
    return terms, tuple(abs(t + 2) for t in terms)


def _square_form(M, vec) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(0)
    A = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(M, vec)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ValueError("linking matrix is singular")
        A[c], A[p] = A[p], A[c]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    sol = [A[i][n] / A[i][i] for i in range(n)]
    return sum((v * s for v, s in zip(vec, sol)), Fraction(0))


def d3_from_diagram(p: SurgeryPresentation, q: Optional[int] = None) -> Fraction:
    """``(alpha^2 - 3 sigma - 2 b2)/4 + q`` for the 4-manifold of the diagram.

    ``q`` defaults to the number of (+1)-components.
    """
    if p.linking and integer_det(p.linking) == 0:
        raise ValueError("linking matrix is singular")
    alpha = [rot for _, rot, _ in p.components]
    a2 = _square_form(p.linking, alpha)
    pos, neg, _ = signature(p.linking)
    b2 = len(p.components)
    if q is None:
        q = p.plus_count
    return (a2 - 3 * (pos - neg) - 2 * b2) / 4 + q


def d3_from_restriction(c_gamma_square, sigma: int, b2: int) -> Fraction:
    return (Fraction(c_gamma_square) - 3 * sigma - 2 * b2) / 4 + 1


def presentation_from_values(gamma: StarShape, values) -> SurgeryPresentation:
    """Surgery model of ``W_Gamma # CP^2`` with rotation vector ``values`` on
    the tree and -1 on the extra summand.

    Only the smooth framings and rotation numbers enter d3, so the front
    geometry is not modelled.  The central vertex and the extra summand
    carry the two (+1)-surgeries, everything else is a (-1)-surgery.
    """
    Q = gamma.tree().matrix()
    n = len(Q)
    comps = []
    for i in range(n):
        coeff = 1 if i == 0 else -1
        comps.append((Q[i][i] - coeff, int(values[i]), coeff))
    comps.append((0, -1, 1))
    L = [row + [0] for row in Q] + [[0] * n + [1]]
    return SurgeryPresentation(tuple(comps), tuple(tuple(r) for r in L))


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    family: str
    model: EmbeddingModel
    pd: HomologyClass
    path: FullPath
    through: int  # index of the restriction of c in path.steps
    d3: Fraction
    d_minus_Y: Fraction

    @property
    def gamma(self) -> StarShape:
        return self.model.gamma

    def to_json(self) -> dict:
        return {"family": self.family,
                "model": self.model.to_json(),
                "class_c": {"pd": self.pd.to_json()},
                "path": self.path.to_json(),
                "through": self.through,
                "d3": str(self.d3),
                "d_minus_Y": str(self.d_minus_Y)}

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(data["family"], EmbeddingModel.from_json(data["model"]),
                   HomologyClass.from_json(data["class_c"]["pd"]),
                   FullPath.from_json(data["path"]), int(data["through"]),
                   Fraction(data["d3"]), Fraction(data["d_minus_Y"]))


@dataclass
class TightnessVerdict:
    outcome: str
    provenance: str
    certificate: Optional[Certificate] = None
    mn_index: Optional[int] = None
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"outcome": self.outcome, "provenance": self.provenance}
        if self.mn_index is not None:
            out["n"] = self.mn_index
        if self.diagnostics:
            out["diagnostics"] = list(self.diagnostics)
        return out


def build_class_c(gamma: StarShape, family: str) -> CharClassC:
    model = embed_union(gamma)
    return build_class_c_A(model) if family == "A" else build_class_c_B(model)


def certify(gamma: StarShape, family: str) -> Certificate:
    """Build c, the full path through its dual-side restriction and d3.

    Raises EmbeddingError / LatticeError when a step fails.
    """
    if family not in ("A", "B"):
        raise ValueError(f"unknown family {family!r}")
    c = build_class_c(gamma, family)
    if not verify_char_and_signature(c):
        raise EmbeddingError("class c is not characteristic with c^2 = 1 - N")
    g_tree = gamma.tree()
    lat_g = lattice_for(g_tree)
    lat_p = lattice_for(c.model.gamma_p.tree())
    lat_p.check_algorithm_preconditions()
    vec = c.side_vector(GAMMA_P)
    path = lat_p.full_path_through(vec)
    if path is None:
        raise LatticeError("restriction of c to the dual tree lies on no full path")
    through = path.steps.index(vec)
    sig = lat_g.signature[0] - lat_g.signature[1]
    d3 = d3_from_restriction(lat_g.square(c.side_vector(GAMMA)), sig, lat_g.n)
    return Certificate(family, c.model, c.pd, path, through, d3, path.degree)


def tightness_criterion(gamma: StarShape, family: str) -> TightnessVerdict:
    """Check the hypotheses, then try to certify tightness.

    Out-of-family input raises ValueError; failures after that are reported
    as Inconclusive, never as tight.
    """
    params = family_a_parameters(gamma) if family == "A" else family_b_parameters(gamma)
    if params is None:
        raise ValueError(f"tree {gamma.to_json()} is not in family {family}")
    si = gamma.seifert()
    if euler_number(si) <= 0:
        raise ValueError("criterion needs positive rational Euler number")
    if realizable(si) is not None:
        raise ValueError("criterion needs a non-realizable triple")
    provenance = "criterion-a" if family == "A" else "criterion-b"
    try:
        cert = certify(gamma, family)
    except (EmbeddingError, LatticeError) as exc:
        return TightnessVerdict(INCONCLUSIVE, provenance, diagnostics=[str(exc)])
    problems = check_certificate(cert)
    if problems:
        return TightnessVerdict(INCONCLUSIVE, provenance, diagnostics=problems)
    return TightnessVerdict(TIGHT_WITH_CERTIFICATE, provenance, certificate=cert)


def check_certificate(cert: Certificate) -> list[str]:
    """Independent re-check of a certificate; returns the list of failures."""
    problems = []
    model = cert.model
    gamma = model.gamma
    try:
        if gamma.dual() != model.gamma_p:
            problems.append("dual side is not the dual of the tree")
        if euler_number(gamma.seifert()) <= 0:
            problems.append("rational Euler number is not positive")
    except ValueError as exc:
        return [f"malformed tree: {exc}"]
    problems += model.verify()
    if problems:
        return problems
    c = CharClassC(model, cert.pd, cert.family, {}, {k: cert.pd.pair(v) for k, v in model.classes.items()})
    if not verify_char_and_signature(c):
        problems.append("class c is not characteristic or c^2 != 1 - N")
    lat_p = lattice_for(model.gamma_p.tree())
    try:
        lat_p.check_algorithm_preconditions()
    except LatticeError as exc:
        problems.append(str(exc))
    path = cert.path
    steps = path.steps
    if not (0 <= cert.through < len(steps)) or steps[cert.through] != c.side_vector(GAMMA_P):
        problems.append("path does not contain the restriction of c")
    if any(len(s) != lat_p.n or not lat_p.is_characteristic(s) for s in steps):
        return problems + ["path contains a non-characteristic vector"]
    if not lat_p.is_initial(steps[0]):
        problems.append("first vector is not initial")
    if not lat_p.is_terminal(steps[-1]):
        problems.append("last vector is not terminal")
    index = model.gamma_p.tree().index
    for j, (a, b, v) in enumerate(zip(steps, steps[1:], path.pushed)):
        i = index.get(v)
        if i is None or a[i] != -lat_p.w[i]:
            problems.append(f"step {j}: push at {v} is not allowed")
            continue
        if lat_p.push(a, i) != b:
            problems.append(f"step {j}: vector does not match the push at {v}")
    if any(lat_p.degree(s) != path.degree for s in steps):
        problems.append("degree is not constant along the path")
    if path.degree != cert.d_minus_Y:
        problems.append("d(-Y) differs from the path degree")
    lat_g = lattice_for(gamma.tree())
    if lat_g.signature[0] != 1:
        problems.append("b2+ of the tree is not 1")
    sig = lat_g.signature[0] - lat_g.signature[1]
    c2g = restrict_square(c, GAMMA)
    d3 = d3_from_restriction(c2g, sig, lat_g.n)
    if d3 != cert.d3:
        problems.append(f"d3 mismatch: recomputed {d3}, certificate says {cert.d3}")
    if d3 != (c2g - sig) / 4:
        problems.append("d3 does not reduce to (c_G^2 - sigma)/4")
    if cert.d3 + cert.d_minus_Y != 0:
        problems.append("d3 + d(-Y) != 0")
    return problems
