"""Deformation families from tangent cocycles, and the affineness probe.

A family perturbs the U coordinates by a parameter combination of tangent
cocycles before applying the diagonal monomial transition:

    (xi, v_1..v_f) = diag * ( (z, u_1..u_f) + sum_s t_s * sigma_s )

Integrability here means literally: the perturbed two-chart gluing admits an
explicit polynomial inverse and both composites are the identity for all
parameter values, which is validated symbolically at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bundles import line_bundle
from .cech import (
    CechClass,
    CechEngine,
    DegreeBox,
    WitnessFound,
    make_class,
    verify_witness,
)
from .ring import LaurentPoly, RingSig, U_FRAME, V_FRAME
from .spaces import ChartMap, TwoChartSpace


class NonInvertiblePerturbation(ValueError):
    """Triangular back-substitution failed to invert the perturbed map."""


@dataclass
class DeformationFamily:
    base_space: TwoChartSpace
    cocycles: List[Tuple[LaurentPoly, ...]]  # tangent-valued, U-frame, base ring
    param_values: Optional[List[Fraction]]  # None = symbolic
    perturbed: TwoChartSpace

    @property
    def symbolic(self) -> bool:
        return self.param_values is None

    def at_params(self, values: Sequence[Fraction]) -> "DeformationFamily":
        """Specialize a symbolic family to numeric parameter values."""
        if not self.symbolic:
            raise ValueError("family already numeric")
        return build_family(self.base_space, self.cocycles, list(values))


def _diagonal_factors(space: TwoChartSpace) -> List[LaurentPoly]:
    """Monomials d_i with forward_i = d_i * coordinate_i."""
    ring = space.uring
    out = []
    for i, fwd in enumerate(space.transition.forward):
        coord = LaurentPoly.var(ring, i)
        if not fwd.is_monomial():
            raise NonInvertiblePerturbation(
                "family construction needs a monomial base transition"
            )
        (exp_f,) = list(fwd.terms)
        (exp_c,) = list(coord.terms)
        diff = tuple(a - b for a, b in zip(exp_f, exp_c))
        if any(e < 0 for e in diff[1:]):
            raise NonInvertiblePerturbation(
                f"forward image {fwd} is not a monomial multiple of coordinate {i}"
            )
        out.append(LaurentPoly.monomial(ring, diff, fwd.terms[exp_f]))
    return out


def build_family(
    space: TwoChartSpace,
    cocycles: Sequence[Sequence[LaurentPoly]],
    param_values: Optional[Sequence[Fraction]] = None,
) -> DeformationFamily:
    """Glue the family over the given tangent cocycles.

    ``param_values`` None keeps t_1..t_p symbolic; otherwise the parameters
    are fixed to the given rationals and the result is an ordinary space.
    Cocycles must have zero base component (the chart invariant xi = z^-1 is
    kept) and the perturbed fiber map must invert by triangular
    back-substitution.
    """
    if not space.params_numeric:
        raise NonInvertiblePerturbation("base space already carries parameters")
    p = len(cocycles)
    ncoords = 1 + space.fiber_count
    for sigma in cocycles:
        if len(sigma) != ncoords:
            raise ValueError("cocycle arity does not match the space")
        if not sigma[0].is_zero():
            raise NonInvertiblePerturbation(
                "cocycles with a nonzero base component would break the xi = z^-1 chart"
            )

    numeric = param_values is not None
    if numeric and len(param_values) != p:
        raise ValueError("parameter count mismatch")
    nparams = 0 if numeric else p
    uring = RingSig(space.fiber_count, nparams, U_FRAME)
    vring = RingSig(space.fiber_count, nparams, V_FRAME)

    def lift(poly: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(
            uring, {exp + (0,) * nparams: c for exp, c in poly.terms.items()}
        )

    diag = [lift(d) for d in _diagonal_factors(space)]
    if numeric:
        tvals = [LaurentPoly.const(uring, v) for v in param_values]
    else:
        tvals = [LaurentPoly.var(uring, 1 + space.fiber_count + s) for s in range(p)]

    forward: List[LaurentPoly] = []
    for i in range(ncoords):
        acc = lift(space.transition.forward[i])
        for s in range(p):
            acc = acc + diag[i] * tvals[s] * lift(cocycles[s][i])
        forward.append(acc)

    inverse = _invert_triangular(forward, uring, vring)
    chart = ChartMap(tuple(forward), tuple(inverse))
    suffix = "deformed" if numeric else "family"
    if numeric:
        vals = ",".join(f"t{s+1}={param_values[s]}" for s in range(p) if param_values[s] != 0)
        name = f"{space.name}[{vals or 't=0'}]"
    else:
        name = f"{space.name}[{suffix}]"
    perturbed = TwoChartSpace(
        name,
        space.fiber_count,
        chart,
        param_values={s: Fraction(v) for s, v in enumerate(param_values)} if numeric else None,
    )
    return DeformationFamily(space, [tuple(c) for c in cocycles], list(param_values) if numeric else None, perturbed)


def _invert_triangular(
    forward: Sequence[LaurentPoly], uring: RingSig, vring: RingSig
) -> List[LaurentPoly]:
    """Solve (z, u_i) in terms of (xi, v_i) by back-substitution.

    Each solvable coordinate i must appear in forward_i as a single diagonal
    term d * z^e * u_i, with every remaining term free of u_i and of the
    still-unsolved fibers; fails with NonInvertiblePerturbation when the
    dependency graph has a cycle.
    """
    f = uring.fibers
    xi = LaurentPoly.var(vring, 0)
    solved: Dict[int, LaurentPoly] = {0: xi ** -1}  # z = xi^-1
    pending = set(range(1, 1 + f))
    while pending:
        progress = False
        for i in sorted(pending):
            fwd = forward[i]
            diag = None  # (z power, coefficient)
            residual_terms = {}
            ok = True
            for exp, coeff in fwd.terms.items():
                if exp[i] == 0:
                    residual_terms[exp] = coeff
                    continue
                fiber_part = exp[1 : 1 + f]
                if (
                    exp[i] == 1
                    and sum(fiber_part) == 1
                    and all(exp[1 + f + s] == 0 for s in range(uring.params))
                    and diag is None
                ):
                    diag = (exp[0], coeff)
                else:
                    ok = False
                    break
            if not ok or diag is None:
                continue
            residual = LaurentPoly(uring, residual_terms)
            used = {
                j for exp in residual.terms for j in range(1, 1 + f) if exp[j] != 0
            }
            if not used.issubset(solved):
                continue
            images = dict(solved)
            for j in pending:
                if j != i:
                    images[j] = LaurentPoly.zero(vring)  # residual is free of these
            expr = residual.substitute(images, vring)
            e, d = diag
            v_i = LaurentPoly.var(vring, i)
            solved[i] = (v_i - expr) * (Fraction(1) / d) * xi ** e
            pending.discard(i)
            progress = True
            break
        if not progress:
            raise NonInvertiblePerturbation(
                "perturbed map is not triangular; cannot back-substitute"
            )
    return [solved[j] for j in range(1 + f)]


# -- affineness probe ----------------------------------------------------------


@dataclass
class DegreeProbe:
    degree: int
    verdict: str  # "not-affine" | "no-obstruction-in-box"
    certification: object
    witness_class: Optional[CechClass]
    witnesses: List[Tuple[CechClass, WitnessFound]]

    def as_dict(self):
        out = {
            "degree": self.degree,
            "verdict": self.verdict,
            "certification": self.certification.as_dict()
            if hasattr(self.certification, "as_dict")
            else str(self.certification),
        }
        if self.witness_class is not None:
            out["witnessClass"] = str(self.witness_class)
        out["coboundaryWitnesses"] = len(self.witnesses)
        return out


@dataclass
class AffinenessReport:
    space_name: str
    probes: List[DegreeProbe]

    @property
    def verdict(self) -> str:
        if any(p.verdict == "not-affine" for p in self.probes):
            return "not affine"
        return "no obstruction found in box"

    def as_dict(self):
        return {
            "space": self.space_name,
            "verdict": self.verdict,
            "probes": [p.as_dict() for p in self.probes],
        }


def affineness_probe(
    space: TwoChartSpace, degrees: Sequence[int], box: DegreeBox
) -> AffinenessReport:
    """Probe H^1(space, O(n)) for the given degrees.

    A certified-nonzero class proves non-affineness (affine spaces have no
    higher coherent cohomology); an all-zero window only reports that no
    obstruction was found, with an explicit coboundary witness per window
    class.
    """
    probes = []
    for n in degrees:
        bundle = line_bundle(space, n)
        engine = CechEngine(bundle)
        res = engine.h1(box)
        if res.generators:
            comp, mono = res.generators[0]
            witness_class = make_class(
                bundle,
                [
                    mono if c + 1 == comp else LaurentPoly.zero(space.uring)
                    for c in range(bundle.rank)
                ],
            )
            probes.append(
                DegreeProbe(n, "not-affine", res.certification, witness_class, [])
            )
            continue
        witnesses = []
        ring = space.uring
        from itertools import product

        f = space.fiber_count
        ranges = [range(box.base_lo, 0)] + [
            range(0, box.fiber_max[j] + 1) for j in range(f)
        ]
        for combo in product(*ranges):
            cls = make_class(bundle, [LaurentPoly.monomial(ring, combo)])
            ok, cert = engine.is_coboundary(cls, box)
            if not ok:
                probes.append(DegreeProbe(n, "not-affine", cert, cls, []))
                break
            assert verify_witness(bundle, cls, cert)
            witnesses.append((cls, cert))
        else:
            probes.append(
                DegreeProbe(n, "no-obstruction-in-box", res.certification, None, witnesses)
            )
    return AffinenessReport(space.name, probes)
