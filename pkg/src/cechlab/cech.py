"""The H1 engine on the two-chart cover.

On a two-set cover every overlap section is a 1-cocycle; a class is trivial
iff it splits as alpha + Minv * (beta o forward) with alpha holomorphic on U
and beta holomorphic on V.  The engine supports two certification tiers:

* Exact: the bundle is a monomial model (single-term transition and matrix
  entries) and the full torus acts; every character slice of the cochain
  space is finite, is enumerated completely, and the answer carries no
  truncation loss.  "Not a coboundary" is a proof in this mode, even against
  infinite holomorphic witnesses, because any witness splits into slices.
* StableInBox: truncated windows with escalation; "is a coboundary" answers
  always come with an explicit witness (exact by construction), "is not"
  answers are stable under the configured number of window enlargements.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bundles import TransitionBundle
from .linalg import IncrementalSpan, QMatrix, solve, NoSolution
from .ring import LaurentPoly
from .spaces import TwoChartSpace


class CechError(Exception):
    pass


class NonFiniteSlice(CechError):
    """No usable grading and box escalation cannot certify the window."""


class CellLimitError(CechError):
    """Window matrix would exceed CECH_MAX_CELLS entries."""


class SymbolicParameterError(CechError):
    """Cohomology requires numeric deformation parameters."""


class BoxError(CechError):
    """Class support escapes the degree box."""


def _max_cells() -> int:
    return int(os.environ.get("CECH_MAX_CELLS", "4000000"))


@dataclass(frozen=True)
class DegreeBox:
    """Exponent window: base range, per-fiber caps, escalation protocol."""

    base_lo: int
    base_hi: int
    fiber_max: Tuple[int, ...]
    escalation_step: int = 4
    stability_rounds: int = 2
    max_escalations: int = 8

    def __post_init__(self):
        if self.base_lo > self.base_hi:
            raise ValueError("base_lo must be <= base_hi")
        if any(f < 0 for f in self.fiber_max):
            raise ValueError("fiber_max entries must be >= 0")

    @staticmethod
    def make(base_lo: int, base_hi: int, fiber_max, fibers: int, **kw) -> "DegreeBox":
        if isinstance(fiber_max, int):
            fiber_max = (fiber_max,) * fibers
        return DegreeBox(base_lo, base_hi, tuple(fiber_max), **kw)

    def escalate(self) -> "DegreeBox":
        s = self.escalation_step
        return replace(
            self,
            base_lo=self.base_lo - s,
            base_hi=self.base_hi + s,
            fiber_max=tuple(f + s for f in self.fiber_max),
        )

    def contains_exp(self, exp: Sequence[int]) -> bool:
        if not self.base_lo <= exp[0] <= self.base_hi:
            return False
        return all(exp[1 + j] <= fm for j, fm in enumerate(self.fiber_max))

    def as_dict(self) -> Dict:
        return {
            "lLo": self.base_lo,
            "lHi": self.base_hi,
            "fiberMax": list(self.fiber_max),
        }


@dataclass(frozen=True)
class CechClass:
    """Vector-valued overlap function in the U frame."""

    space: TwoChartSpace
    bundle: TransitionBundle
    components: Tuple[LaurentPoly, ...]

    def __post_init__(self):
        if len(self.components) != self.bundle.rank:
            raise ValueError("component count does not match bundle rank")
        for p in self.components:
            if p.ring != self.space.uring:
                raise ValueError("cocycle components must be U-frame overlap functions")

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.components) + ")"


def make_class(bundle: TransitionBundle, components: Sequence[LaurentPoly]) -> CechClass:
    return CechClass(bundle.space, bundle, tuple(components))


def monomial_class(bundle: TransitionBundle, component: int, exp, coeff=1) -> CechClass:
    """Single-monomial cocycle; ``component`` is 1-based."""
    ring = bundle.space.uring
    comps = [LaurentPoly.zero(ring) for _ in range(bundle.rank)]
    comps[component - 1] = LaurentPoly.monomial(ring, exp, coeff)
    return make_class(bundle, comps)


# -- certifications ----------------------------------------------------------


@dataclass(frozen=True)
class Exact:
    kind: str = "Exact"

    def as_dict(self):
        return {"kind": "Exact"}


@dataclass(frozen=True)
class StableInBox:
    box: DegreeBox
    rounds: int
    kind: str = "StableInBox"

    def as_dict(self):
        return {"kind": "StableInBox", "box": self.box.as_dict(), "rounds": self.rounds}


@dataclass(frozen=True)
class WitnessFound:
    """Explicit decomposition sigma = alpha + Minv * (beta o forward)."""

    alpha: Tuple[LaurentPoly, ...]
    beta: Tuple[LaurentPoly, ...]
    kind: str = "WitnessFound"

    def as_dict(self):
        return {
            "kind": "WitnessFound",
            "alpha": [str(p) for p in self.alpha],
            "beta": [str(p) for p in self.beta],
        }


@dataclass
class H1Result:
    generators: List[Tuple[int, LaurentPoly]]  # (1-based component, monomial)
    dims_by_fiber_degree: Dict[int, int]
    certification: object
    box: DegreeBox
    pattern: Optional[str] = None

    def generator_keys(self) -> List[Tuple[int, Tuple[int, ...]]]:
        return [(c, next(iter(p.terms))) for c, p in self.generators]

    @property
    def dim(self) -> int:
        return len(self.generators)


@dataclass(frozen=True)
class ReduceResult:
    representative: CechClass
    witness: WitnessFound
    certification: object


# -- helpers -----------------------------------------------------------------

Key = Tuple[int, Tuple[int, ...]]  # (component 0-based, exponent tuple)
Vec = Dict[Key, Fraction]


def _class_to_vec(cls: CechClass) -> Vec:
    out: Vec = {}
    for c, poly in enumerate(cls.components):
        for exp, coeff in poly.terms.items():
            out[(c, exp)] = coeff
    return out


def _vec_to_class(bundle: TransitionBundle, vec: Vec) -> CechClass:
    ring = bundle.space.uring
    comps = [dict() for _ in range(bundle.rank)]
    for (c, exp), coeff in vec.items():
        comps[c][exp] = coeff
    return make_class(bundle, [LaurentPoly(ring, t) for t in comps])


def _poly_vec(rank: int, polys: Dict[int, LaurentPoly]) -> Vec:
    out: Vec = {}
    for c, poly in polys.items():
        for exp, coeff in poly.terms.items():
            out[(c, exp)] = out.get((c, exp), Fraction(0)) + coeff
    return {k: v for k, v in out.items() if v != 0}


def validate_numeric(space: TwoChartSpace):
    if not space.params_numeric:
        raise SymbolicParameterError(
            "cohomology computations require numeric deformation parameters"
        )


# -- exact graded model ------------------------------------------------------


class _ExactModel:
    """Full-torus character bookkeeping for monomial-model bundles.

    Component offsets D (U side) and D' (V side) satisfy, for every nonzero
    single-term entry, weight(M[c'][c]) = D[c] - D'[c'] and
    weight(Minv[c][c']) = D'[c'] - D[c]; then every coboundary generator is
    homogeneous and each character slice holds at most rank-many monomials.
    """

    def __init__(self, bundle: TransitionBundle):
        self.bundle = bundle
        space = bundle.space
        self.nv = 1 + space.fiber_count
        self.r = bundle.rank
        fwd = space.transition.forward
        self.v_weights = [self._term_weight(p) for p in fwd]
        # fiber part of the v-image weights must be unimodular to invert the
        # character map
        f = space.fiber_count
        g_rows = [
            [Fraction(self.v_weights[1 + i][1 + j]) for i in range(f)] for j in range(f)
        ]
        self.G = QMatrix(g_rows) if f else None
        self.offsets_u: List[Tuple[int, ...]] = [None] * self.r
        self.offsets_v: List[Tuple[int, ...]] = [None] * self.r
        self._solve_offsets()

    def _term_weight(self, poly: LaurentPoly) -> Tuple[int, ...]:
        (exp,) = list(poly.terms)
        return exp[: self.nv]

    def _solve_offsets(self):
        M, Minv = self.bundle.M, self.bundle.Minv
        edges: Dict[Tuple[str, int], List] = {}
        for cp in range(self.r):
            for c in range(self.r):
                if not M[cp][c].is_zero():
                    w = self._term_weight(M[cp][c])
                    edges.setdefault(("U", c), []).append(("V", cp, w))
                    edges.setdefault(("V", cp), []).append(("U", c, w))
                if not Minv[c][cp].is_zero():
                    w = self._term_weight(Minv[c][cp])
                    edges.setdefault(("U", c), []).append(("V", cp, tuple(-x for x in w)))
                    edges.setdefault(("V", cp), []).append(("U", c, tuple(-x for x in w)))
        # BFS assignment: weight(M[c'][c]) = D[c] - D'[c'], so along an
        # ("U", c) -> ("V", c') edge with weight w we set D'[c'] = D[c] - w.
        assign: Dict[Tuple[str, int], Tuple[int, ...]] = {}
        for start in [("U", c) for c in range(self.r)] + [("V", c) for c in range(self.r)]:
            if start in assign or start not in edges:
                if start not in assign:
                    assign[start] = (0,) * self.nv
                continue
            assign[start] = (0,) * self.nv
            queue = [start]
            while queue:
                node = queue.pop()
                side, idx = node
                for other_side, other_idx, w in edges.get(node, []):
                    # relation: D[u] - D'[v] = w for the (u -> v) reading
                    if side == "U":
                        val = tuple(a - b for a, b in zip(assign[node], w))
                    else:
                        val = tuple(a + b for a, b in zip(assign[node], w))
                    other = (other_side, other_idx)
                    if other in assign:
                        if assign[other] != val:
                            raise ValueError("bundle is not torus-equivariant")
                    else:
                        assign[other] = val
                        queue.append(other)
        for c in range(self.r):
            self.offsets_u[c] = assign[("U", c)]
            self.offsets_v[c] = assign[("V", c)]

    @staticmethod
    def build(bundle: TransitionBundle) -> Optional["_ExactModel"]:
        if not bundle.is_monomial_model():
            return None
        try:
            model = _ExactModel(bundle)
        except ValueError:
            return None
        if model.G is not None:
            try:
                f = bundle.space.fiber_count
                for j in range(f):
                    rhs = [Fraction(int(i == j)) for i in range(f)]
                    solve(model.G, rhs)
            except NoSolution:
                return None
        return model

    def slice_of(self, key: Key) -> Tuple[int, ...]:
        c, exp = key
        return tuple(e + d for e, d in zip(exp[: self.nv], self.offsets_u[c]))

    def slice_members(self, chi: Tuple[int, ...]) -> List[Key]:
        out = []
        for c in range(self.r):
            exp = tuple(x - d for x, d in zip(chi, self.offsets_u[c]))
            if all(e >= 0 for e in exp[1:]):
                out.append((c, exp))
        return out

    def slice_generators(self, chi: Tuple[int, ...]):
        """All coboundary generators meeting the slice: (tag, vector) pairs."""
        gens = []
        for c, exp in self.slice_members(chi):
            if exp[0] >= 0:
                gens.append((("U", c, exp), {(c, exp): Fraction(1)}))
        space = self.bundle.space
        ring = space.uring
        f = space.fiber_count
        fwd = space.transition.forward
        for cp in range(self.r):
            target = tuple(x - d for x, d in zip(chi, self.offsets_v[cp]))
            if f:
                try:
                    beta = solve(self.G, [Fraction(t) for t in target[1:]])
                except NoSolution:
                    continue
                if any(b.denominator != 1 or b < 0 for b in beta):
                    continue
                beta = [int(b) for b in beta]
            else:
                beta = []
            m = sum(b * self.v_weights[1 + i][0] for i, b in enumerate(beta)) - target[0]
            if m < 0:
                continue
            factor = LaurentPoly.var(ring, 0, -m)
            for i, b in enumerate(beta):
                if b:
                    factor = factor * fwd[1 + i] ** b
            vec: Vec = {}
            for c in range(self.r):
                entry = self.bundle.Minv[c][cp]
                if entry.is_zero():
                    continue
                poly = entry * factor
                for exp, coeff in poly.terms.items():
                    vec[(c, exp)] = vec.get((c, exp), Fraction(0)) + coeff
            vec = {k: v for k, v in vec.items() if v != 0}
            if vec:
                gens.append((("V", cp, m, tuple(beta)), vec))
        return gens


# -- box window model --------------------------------------------------------


class _BoxModel:
    """Window-truncated coboundary space with conserved-grading bucketing."""

    def __init__(self, bundle: TransitionBundle):
        self.bundle = bundle
        self.space = bundle.space
        self.r = bundle.rank
        self.nv = 1 + self.space.fiber_count
        self.gradings = self._usable_gradings()

    def _usable_gradings(self):
        """Conserved lattice vectors under which all bundle entries are
        homogeneous, together with consistent component offsets."""
        usable = []
        for g in self.space.gradings():
            ok = True
            weights: Dict[Tuple[str, int, int], int] = {}
            for cp in range(self.r):
                for c in range(self.r):
                    for which, entry in (("M", self.bundle.M[cp][c]), ("I", self.bundle.Minv[c][cp])):
                        if entry.is_zero():
                            continue
                        ws = {g.weight_of(e[: self.nv]) for e in entry.terms}
                        if len(ws) != 1:
                            ok = False
                            break
                        weights[(which, cp, c)] = ws.pop()
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                continue
            offs = self._offsets_for(g, weights)
            if offs is not None:
                usable.append((g, offs))
        return usable

    def _offsets_for(self, g, weights):
        du = [None] * self.r
        dv = [None] * self.r
        # reuse the equivariance relations, scalar-valued per lattice vector
        adj: Dict[Tuple[str, int], List] = {}
        for (which, cp, c), w in weights.items():
            w = w if which == "M" else -w
            adj.setdefault(("U", c), []).append(("V", cp, w))
            adj.setdefault(("V", cp), []).append(("U", c, w))
        assign: Dict[Tuple[str, int], int] = {}
        nodes = [("U", c) for c in range(self.r)] + [("V", c) for c in range(self.r)]
        for start in nodes:
            if start in assign:
                continue
            assign[start] = 0
            queue = [start]
            while queue:
                node = queue.pop()
                side, idx = node
                for oside, oidx, w in adj.get(node, []):
                    val = assign[node] - w if side == "U" else assign[node] + w
                    other = (oside, oidx)
                    if other in assign:
                        if assign[other] != val:
                            return None
                    else:
                        assign[other] = val
                        queue.append(other)
        for c in range(self.r):
            du[c] = assign.get(("U", c), 0)
            dv[c] = assign.get(("V", c), 0)
        return (du, dv)

    def bucket_of(self, key: Key) -> Tuple[int, ...]:
        c, exp = key
        return tuple(
            g.weight_of(exp[: self.nv]) + offs[0][c] for g, offs in self.gradings
        )

    def window_monomials(self, box: DegreeBox) -> List[Key]:
        """All cochain monomials inside the window, canonical order."""
        from itertools import product

        f = self.space.fiber_count
        ranges = [range(box.base_lo, box.base_hi + 1)] + [
            range(0, box.fiber_max[j] + 1) for j in range(f)
        ]
        out = []
        for c in range(self.r):
            for combo in product(*ranges):
                out.append((c, tuple(combo)))
        out.sort()
        return out

    def u_generators(self, box: DegreeBox):
        from itertools import product

        f = self.space.fiber_count
        lo = max(0, box.base_lo)
        if lo > box.base_hi:
            return []
        ranges = [range(lo, box.base_hi + 1)] + [
            range(0, box.fiber_max[j] + 1) for j in range(f)
        ]
        gens = []
        for c in range(self.r):
            for combo in product(*ranges):
                exp = tuple(combo)
                gens.append((("U", c, exp), {(c, exp): Fraction(1)}))
        return gens

    def v_generators(self, box: DegreeBox):
        """V-side generators Minv * (V-monomial o forward) whose support lies
        inside the window.

        Enumeration bounds come from exact degree-interval arithmetic on the
        entries of Minv and the forward transition: base-width, total fiber
        degree and per-variable fiber degree are all additive under products,
        so each constraint is monotone in the V-exponents.  A fiber image
        with zero width and zero fiber degree would admit unboundedly many
        window generators and raises NonFiniteSlice.
        """
        space = self.space
        ring = space.uring
        f = space.fiber_count
        fwd = space.transition.forward
        width = []
        minfib = []
        minvar = []
        for i in range(f):
            p = fwd[1 + i]
            zmin, zmax = p.base_range()
            width.append(zmax - zmin)
            minfib.append(p.min_fiber_degree())
            minvar.append([p.min_var_degree(1 + j) for j in range(f)])
            if width[-1] == 0 and minfib[-1] == 0:
                raise NonFiniteSlice(
                    f"fiber image {p} admits unbounded window generators"
                )
        gens = []
        win_width = box.base_hi - box.base_lo
        fib_budget = sum(box.fiber_max)
        for cp in range(self.r):
            col = [self.bundle.Minv[c][cp] for c in range(self.r)]
            rows = [c for c in range(self.r) if not col[c].is_zero()]
            ecol_width = max(col[c].base_range()[1] - col[c].base_range()[0] for c in rows)
            ecol_minfib = max(col[c].min_fiber_degree() for c in rows)
            ecol_minvar = [
                max(col[c].min_var_degree(1 + j) for c in rows) for j in range(f)
            ]

            def rec(i: int, beta: List[int]):
                if i == f:
                    factor = LaurentPoly.const(ring, 1)
                    for j, bb in enumerate(beta):
                        if bb:
                            factor = factor * fwd[1 + j] ** bb
                    self._emit(gens, cp, rows, col, beta, factor, box)
                    return
                b = 0
                while True:
                    trial = beta + [b]
                    if sum(bb * width[j] for j, bb in enumerate(trial)) + ecol_width > win_width:
                        break
                    if sum(bb * minfib[j] for j, bb in enumerate(trial)) + ecol_minfib > fib_budget:
                        break
                    bad = False
                    for j in range(f):
                        s = sum(bb * minvar[jj][j] for jj, bb in enumerate(trial))
                        if s + ecol_minvar[j] > box.fiber_max[j]:
                            bad = True
                            break
                    if bad:
                        break
                    rec(i + 1, trial)
                    b += 1
                    if b > 4 * (win_width + fib_budget) + 8:
                        raise NonFiniteSlice("enumeration bound exceeded")

            rec(0, [])
        return gens

    def _emit(self, gens, cp, rows, col, beta, factor, box):
        polys = {c: col[c] * factor for c in rows}
        zmaxes = [p.base_range()[1] for p in polys.values()]
        zmins = [p.base_range()[0] for p in polys.values()]
        m_lo = max(max(zmaxes) - box.base_hi, 0)
        m_hi = min(zmins) - box.base_lo
        if m_hi < m_lo:
            return
        for m in range(m_lo, m_hi + 1):
            vec: Vec = {}
            ok = True
            for c, p in polys.items():
                for exp, coeff in p.terms.items():
                    e = (exp[0] - m,) + exp[1:]
                    if not box.contains_exp(e):
                        ok = False
                        break
                    vec[(c, e)] = vec.get((c, e), Fraction(0)) + coeff
                if not ok:
                    break
            if not ok or not vec:
                continue
            gens.append((("V", cp, m, tuple(beta)), vec))


# -- witnesses ---------------------------------------------------------------


def _witness_from_tags(bundle: TransitionBundle, coeffs: Dict) -> WitnessFound:
    space = bundle.space
    uring = space.uring
    vring = space.vring
    alpha = [LaurentPoly.zero(uring) for _ in range(bundle.rank)]
    beta = [LaurentPoly.zero(vring) for _ in range(bundle.rank)]
    for tag, coeff in coeffs.items():
        if tag[0] == "U":
            _, c, exp = tag
            alpha[c] = alpha[c] + LaurentPoly.monomial(uring, exp, coeff)
        elif tag[0] == "V":
            _, cp, m, bts = tag
            # the V monomial xi^m v^beta; its forward image is z^-m (v o fwd)^beta
            exp = (m,) + tuple(bts) + (0,) * vring.params
            beta[cp] = beta[cp] + LaurentPoly.monomial(vring, exp, coeff)
        else:
            raise ValueError(f"unexpected generator tag {tag}")
    return WitnessFound(tuple(alpha), tuple(beta))


def verify_witness(bundle: TransitionBundle, cls: CechClass, witness: WitnessFound) -> bool:
    """Recompute alpha + Minv * (beta o forward) and compare with the class."""
    space = bundle.space
    chart = space.transition
    ring = space.uring
    beta_u = [chart.to_u_frame(b) for b in witness.beta]
    for c in range(bundle.rank):
        acc = witness.alpha[c]
        for cp in range(bundle.rank):
            acc = acc + bundle.Minv[c][cp] * beta_u[cp]
        if acc != cls.components[c]:
            return False
    return True


# -- the engine --------------------------------------------------------------


class CechEngine:
    def __init__(self, bundle: TransitionBundle):
        validate_numeric(bundle.space)
        self.bundle = bundle
        self.exact = _ExactModel.build(bundle)
        self.box_model = None if self.exact else _BoxModel(bundle)

    # ---- exact mode ----

    def _exact_basis_for_slices(self, slices, candidates_by_slice):
        """Greedy monomial basis per character slice; returns basis keys and,
        per slice, the span structure for reuse."""
        basis: List[Key] = []
        spans = {}
        for chi in slices:
            members = self.exact.slice_members(chi)
            assert len(members) <= self.bundle.rank  # finiteness of the slice
            span = IncrementalSpan()
            for tag, vec in self.exact.slice_generators(chi):
                span.insert(vec, tag)
            for key in sorted(candidates_by_slice[chi]):
                if span.insert({key: Fraction(1)}, ("B", key)):
                    basis.append(key)
            spans[chi] = span
        return basis, spans

    def _exact_h1(self, box: DegreeBox) -> H1Result:
        model = self.exact
        candidates: Dict[Tuple[int, ...], List[Key]] = {}
        for key in _BoxModel(self.bundle).window_monomials(box):
            candidates.setdefault(model.slice_of(key), []).append(key)
        basis, _ = self._exact_basis_for_slices(sorted(candidates), candidates)
        return _make_h1_result(self.bundle, sorted(basis), Exact(), box)

    def _exact_decompose(self, vec: Vec):
        """Decompose into coboundary tags; None if some slice obstructs."""
        model = self.exact
        by_slice: Dict[Tuple[int, ...], Vec] = {}
        for key, coeff in vec.items():
            by_slice.setdefault(model.slice_of(key), {})[key] = coeff
        coeffs: Dict = {}
        for chi, part in sorted(by_slice.items()):
            span = IncrementalSpan()
            for tag, gvec in model.slice_generators(chi):
                span.insert(gvec, tag)
            dec = span.decompose(part)
            if dec is None:
                return None
            for tag, c in dec.items():
                coeffs[tag] = coeffs.get(tag, Fraction(0)) + c
        return coeffs

    # ---- box mode ----

    def _box_spans(self, box: DegreeBox):
        """Per-bucket spans of all window coboundary generators."""
        bm = self.box_model
        gens = bm.u_generators(box) + bm.v_generators(box)
        buckets: Dict[Tuple[int, ...], IncrementalSpan] = {}
        sizes: Dict[Tuple[int, ...], int] = {}
        for tag, vec in gens:
            key = bm.bucket_of(next(iter(vec)))
            sizes[key] = sizes.get(key, 0) + len(vec)
        monos = bm.window_monomials(box)
        mono_buckets: Dict[Tuple[int, ...], int] = {}
        for key in monos:
            b = bm.bucket_of(key)
            mono_buckets[b] = mono_buckets.get(b, 0) + 1
        cells = sum(
            mono_buckets.get(b, 0) * max(1, sizes.get(b, 0)) for b in set(mono_buckets) | set(sizes)
        )
        if cells > _max_cells():
            raise CellLimitError(
                f"window needs ~{cells} cells; raise CECH_MAX_CELLS to allow"
            )
        for tag, vec in gens:
            keys = {bm.bucket_of(k) for k in vec}
            assert len(keys) == 1, f"generator {tag} not grading-homogeneous"
            buckets.setdefault(keys.pop(), IncrementalSpan()).insert(vec, tag)
        return buckets, monos

    def _box_basis(self, box: DegreeBox, inner: DegreeBox):
        buckets, monos = self._box_spans(box)
        bm = self.box_model
        basis = []
        for key in monos:
            if not inner.contains_exp(key[1]):
                continue
            span = buckets.setdefault(bm.bucket_of(key), IncrementalSpan())
            if span.insert({key: Fraction(1)}, ("B", key)):
                basis.append(key)
        return basis, buckets

    def _box_h1(self, box: DegreeBox) -> H1Result:
        window = box
        basis, _ = self._box_basis(window, box)
        rounds = 0
        escalations = 0
        while rounds < box.stability_rounds:
            window = window.escalate()
            escalations += 1
            if escalations > box.max_escalations:
                raise NonFiniteSlice(
                    "window basis did not stabilize within the escalation budget"
                )
            new_basis, _ = self._box_basis(window, box)
            if new_basis == basis:
                rounds += 1
            else:
                basis = new_basis
                rounds = 0
        cert = StableInBox(window, box.stability_rounds)
        return _make_h1_result(self.bundle, sorted(basis), cert, box)

    def _box_decompose(self, vec: Vec, box: DegreeBox):
        buckets, _ = self._box_spans(box)
        bm = self.box_model
        by_bucket: Dict[Tuple[int, ...], Vec] = {}
        for key, coeff in vec.items():
            by_bucket.setdefault(bm.bucket_of(key), {})[key] = coeff
        coeffs: Dict = {}
        for bk, part in sorted(by_bucket.items()):
            span = buckets.get(bk)
            dec = span.decompose(part) if span is not None else None
            if dec is None:
                return None
            for tag, c in dec.items():
                coeffs[tag] = coeffs.get(tag, Fraction(0)) + c
        return coeffs

    # ---- public operations ----

    def h1(self, box: DegreeBox) -> H1Result:
        return self._exact_h1(box) if self.exact else self._box_h1(box)

    def is_coboundary(self, cls: CechClass, box: DegreeBox):
        vec = _class_to_vec(cls)
        if not vec:
            ring = self.bundle.space.uring
            vring = self.bundle.space.vring
            zeros_u = tuple(LaurentPoly.zero(ring) for _ in range(self.bundle.rank))
            zeros_v = tuple(LaurentPoly.zero(vring) for _ in range(self.bundle.rank))
            return True, WitnessFound(zeros_u, zeros_v)
        for key in vec:
            if not box.contains_exp(key[1]):
                raise BoxError(f"class monomial {key} outside the degree box")
        if self.exact:
            coeffs = self._exact_decompose(vec)
            if coeffs is None:
                return False, Exact()
            return True, _witness_from_tags(self.bundle, coeffs)
        window = box
        coeffs = self._box_decompose(vec, window)
        rounds = 0
        while coeffs is None and rounds < box.stability_rounds:
            window = window.escalate()
            coeffs = self._box_decompose(vec, window)
            rounds += 1
        if coeffs is None:
            return False, StableInBox(window, box.stability_rounds)
        return True, _witness_from_tags(self.bundle, coeffs)

    def reduce(self, cls: CechClass, box: DegreeBox) -> ReduceResult:
        vec = _class_to_vec(cls)
        for key in vec:
            if not box.contains_exp(key[1]):
                raise BoxError(f"class monomial {key} outside the degree box")
        if self.exact:
            candidates: Dict[Tuple[int, ...], List[Key]] = {}
            for key in _BoxModel(self.bundle).window_monomials(box):
                candidates.setdefault(self.exact.slice_of(key), []).append(key)
            for key in vec:
                chi = self.exact.slice_of(key)
                candidates.setdefault(chi, [])
                if key not in candidates[chi]:
                    candidates[chi].append(key)
            _, spans = self._exact_basis_for_slices(sorted(candidates), candidates)
            cert = Exact()
            coeffs: Dict = {}
            by_slice: Dict[Tuple[int, ...], Vec] = {}
            for key, coeff in vec.items():
                by_slice.setdefault(self.exact.slice_of(key), {})[key] = coeff
            for chi, part in sorted(by_slice.items()):
                dec = spans[chi].decompose(part)
                assert dec is not None  # candidates include the class support
                for tag, c in dec.items():
                    coeffs[tag] = coeffs.get(tag, Fraction(0)) + c
        else:
            h1res = self._box_h1(box)
            window = h1res.certification.box
            buckets, monos = self._box_spans(window)
            bm = self.box_model
            for key in monos:
                if not box.contains_exp(key[1]):
                    continue
                span = buckets.setdefault(bm.bucket_of(key), IncrementalSpan())
                span.insert({key: Fraction(1)}, ("B", key))
            coeffs = {}
            by_bucket: Dict[Tuple[int, ...], Vec] = {}
            for key, coeff in vec.items():
                by_bucket.setdefault(bm.bucket_of(key), {})[key] = coeff
            for bk, part in sorted(by_bucket.items()):
                dec = buckets[bk].decompose(part)
                assert dec is not None
                for tag, c in dec.items():
                    coeffs[tag] = coeffs.get(tag, Fraction(0)) + c
            cert = h1res.certification
        rep_vec: Vec = {}
        wit_coeffs: Dict = {}
        for tag, c in coeffs.items():
            if tag[0] == "B":
                rep_vec[tag[1]] = rep_vec.get(tag[1], Fraction(0)) + c
            else:
                wit_coeffs[tag] = wit_coeffs.get(tag, Fraction(0)) + c
        representative = _vec_to_class(self.bundle, {k: v for k, v in rep_vec.items() if v != 0})
        witness = _witness_from_tags(self.bundle, wit_coeffs)
        return ReduceResult(representative, witness, cert)

    def coboundary_generators(self, box: DegreeBox, containment: str = "meets"):
        """List window coboundary generators.

        ``within``: support inside the box.  ``meets`` (listing default):
        generators enumerated inside the box enlarged by one escalation step
        whose support intersects the box.
        """
        bm = self.box_model if self.box_model else _BoxModel(self.bundle)
        if containment == "within":
            gens = bm.u_generators(box) + bm.v_generators(box)
        elif containment == "meets":
            big = box.escalate()
            gens = bm.u_generators(box)
            for tag, vec in bm.v_generators(big):
                if any(box.contains_exp(key[1]) for key in vec):
                    gens.append((tag, vec))
        else:
            raise ValueError("containment must be 'within' or 'meets'")
        return [(_tag_public(tag), _vec_to_class(self.bundle, vec)) for tag, vec in gens]


def _tag_public(tag):
    if tag[0] == "U":
        return {"side": "U", "component": tag[1] + 1, "exponents": list(tag[2])}
    return {
        "side": "V",
        "component": tag[1] + 1,
        "xi_power": tag[2],
        "v_exponents": list(tag[3]),
    }


def _make_h1_result(bundle, basis_keys, certification, box) -> H1Result:
    ring = bundle.space.uring
    gens = [
        (c + 1, LaurentPoly.monomial(ring, exp)) for c, exp in basis_keys
    ]
    f = bundle.space.fiber_count
    dims: Dict[int, int] = {}
    for c, exp in basis_keys:
        d = sum(exp[1 : 1 + f])
        dims[d] = dims.get(d, 0) + 1
    pattern = None
    if dims:
        degs = sorted(dims)
        counts = {dims[d] for d in degs}
        if len(counts) == 1 and len(degs) == degs[-1] - degs[0] + 1 and len(degs) > 2:
            pattern = f"{counts.pop()} classes per fiber degree ({degs[0]}..{degs[-1]})"
    return H1Result(gens, dims, certification, box, pattern)


# -- module-level operations --------------------------------------------------


def h1(bundle: TransitionBundle, box: DegreeBox) -> H1Result:
    return CechEngine(bundle).h1(box)


def is_coboundary(bundle: TransitionBundle, cls: CechClass, box: DegreeBox):
    return CechEngine(bundle).is_coboundary(cls, box)


def reduce_class(bundle: TransitionBundle, cls: CechClass, box: DegreeBox) -> ReduceResult:
    return CechEngine(bundle).reduce(cls, box)


def coboundary_generators(bundle: TransitionBundle, box: DegreeBox, containment: str = "meets"):
    return CechEngine(bundle).coboundary_generators(box, containment)
