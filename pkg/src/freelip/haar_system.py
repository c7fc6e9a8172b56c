"""Haar-system machinery for binary and multibranching diamond graphs.

Edge spaces of diamond graphs are identified with step functions on (0,1]:
the edge that evolved through quarters q_1...q_n sits on the cell with
base-4 digits q_1...q_n, carrying the L1-normalized indicator scaled by
4^n.  Under this identification the cycle space is the span of the even
Haar levels, projections become exact rational matrices on cell values,
and the Banach-Mazur bounds reduce to finitely many quotient-norm LPs.

Everything here runs in exact rationals; there is no float path.

The even/odd Haar levels also show up as quasi-greedy subsequences of the
Haar basis in L1; that direction is documentation only, nothing here
computes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, projections, simplex
from .cyclespace import EdgeVector, fundamental_cycle_basis
from .errors import ResolutionTooCoarse, ResourceLimit, ValidationError
from .graphs import TwoPoleGraph, diamond, multidiamond
from .rational import ZERO

QUARTER = {"tl": 0, "bl": 1, "br": 2, "tr": 3}


@dataclass(frozen=True)
class DyadicVector:
    """Piecewise-constant function on (0,1] as cell values on a uniform grid.

    Norms are the discrete versions of the integral norms: l1 is the mean
    absolute value, linf the maximum absolute value.
    """

    values: tuple[Fraction, ...]

    @staticmethod
    def of(values) -> "DyadicVector":
        return DyadicVector(tuple(Fraction(v) for v in values))

    def __len__(self):
        return len(self.values)

    def l1(self) -> Fraction:
        return sum((abs(v) for v in self.values), start=ZERO) / len(self.values)

    def linf(self) -> Fraction:
        return max((abs(v) for v in self.values), default=ZERO)

    def inner(self, other: "DyadicVector") -> Fraction:
        if len(other) != len(self):
            raise ValidationError("resolution mismatch")
        n = len(self.values)
        return sum((a * b for a, b in zip(self.values, other.values)), start=ZERO) / n

    def __add__(self, other: "DyadicVector") -> "DyadicVector":
        return DyadicVector(tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "DyadicVector") -> "DyadicVector":
        return DyadicVector(tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "DyadicVector":
        c = Fraction(c)
        return DyadicVector(tuple(c * v for v in self.values))

    def refine(self, factor: int) -> "DyadicVector":
        out = []
        for v in self.values:
            out.extend([v] * factor)
        return DyadicVector(tuple(out))


@dataclass(frozen=True)
class HaarIndex:
    """Level/position addressing; level -1 denotes the constant h_0."""

    level: int
    position: int

    def __post_init__(self):
        if self.level < -1:
            raise ValidationError("level must be >= -1")
        if self.level == -1 and self.position != 0:
            raise ValidationError("h_0 has position 0")
        if self.level >= 0 and not (0 <= self.position < 2 ** self.level):
            raise ValidationError("position out of range for level")

    @property
    def flat(self) -> int:
        return 0 if self.level == -1 else 2 ** self.level + self.position

    @staticmethod
    def from_flat(i: int) -> "HaarIndex":
        if i == 0:
            return HaarIndex(-1, 0)
        level = i.bit_length() - 1
        return HaarIndex(level, i - 2 ** level)


def haar(i: int, resolution: int) -> DyadicVector:
    """The i-th Haar function on a grid of 2**resolution cells.

    h_0 is the constant 1; h_{2^n + j} is +1 on the left half and -1 on the
    right half of the j-th dyadic interval of length 2^{-n}.
    """
    cells = 2 ** resolution
    if i == 0:
        return DyadicVector((Fraction(1),) * cells)
    idx = HaarIndex.from_flat(i)
    if idx.level + 1 > resolution:
        raise ResolutionTooCoarse(f"h_{i} needs resolution >= {idx.level + 1}")
    block = cells // 2 ** idx.level
    half = block // 2
    vals = [ZERO] * cells
    start = idx.position * block
    for t in range(start, start + half):
        vals[t] = Fraction(1)
    for t in range(start + half, start + block):
        vals[t] = Fraction(-1)
    return DyadicVector(tuple(vals))


def level_indices(level: int) -> list[int]:
    """Flat indices of H_level (with H_{-1} = {h_0})."""
    if level == -1:
        return [0]
    return list(range(2 ** level, 2 ** (level + 1)))


def haar_coefficients(v: DyadicVector) -> dict[int, Fraction]:
    """Expansion of a step function in the (orthogonal) Haar system.

    Returns {flat index: coefficient} with v = sum c_i h_i; the grid must
    have power-of-two size.  Fast transform: one pairwise
    average/difference pass per level.
    """
    n = len(v)
    resolution = n.bit_length() - 1
    if 2 ** resolution != n:
        raise ValidationError("grid size must be a power of two")
    coeffs: dict[int, Fraction] = {}
    cur = list(v.values)
    level = resolution - 1
    while len(cur) > 1:
        nxt = []
        for j in range(0, len(cur), 2):
            avg = (cur[j] + cur[j + 1]) / 2
            diff = (cur[j] - cur[j + 1]) / 2
            if diff:
                coeffs[2 ** level + j // 2] = diff
            nxt.append(avg)
        cur = nxt
        level -= 1
    if cur[0]:
        coeffs[0] = cur[0]
    return coeffs


# ---------------------------------------------------------------------------
# Binary diamond identification
# ---------------------------------------------------------------------------

def diamond_cell_index(edge_id: str, n: int) -> int:
    """Cell of an edge of D_n: base-4 digits are the quarter labels."""
    parts = edge_id.split("/") if edge_id else []
    if len(parts) != n:
        raise ValidationError(f"edge id {edge_id!r} is not at level {n}")
    idx = 0
    for seg in parts:
        idx = 4 * idx + QUARTER[seg]
    return idx


def edge_embedding(n: int) -> list[DyadicVector]:
    """The 4^n disjointly supported L1-normalized edge indicators of D_n."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    cells = 4 ** n
    out = []
    for i in range(cells):
        vals = [ZERO] * cells
        vals[i] = Fraction(cells)
        out.append(DyadicVector(tuple(vals)))
    return out


def graph_to_dyadic(x: EdgeVector, n: int) -> DyadicVector:
    """Edge vector on D_n -> step function (cell value 4^n times coefficient)."""
    cells = 4 ** n
    vals = [ZERO] * cells
    for eid, c in x.coeffs.items():
        vals[diamond_cell_index(eid, n)] = Fraction(cells) * c
    return DyadicVector(tuple(vals))


def outer_cycle_walk(n: int) -> list[tuple[str, int]]:
    """Outer cycle of D_n as a direction-tagged edge walk.

    Ascending edges refine through the left path of their copy, descending
    edges through the right path.
    """
    walk = [("bl", 1), ("tl", 1), ("tr", -1), ("br", -1)]
    for _ in range(n - 1):
        nxt = []
        for eid, s in walk:
            if s > 0:
                nxt += [(f"{eid}/bl", 1), (f"{eid}/tl", 1)]
            else:
                nxt += [(f"{eid}/tr", -1), (f"{eid}/br", -1)]
        walk = nxt
    return walk


def outer_cycle(n: int) -> DyadicVector:
    """Signed indicator of the large outer cycle of D_n, as a step function.

    Built by the interval-replacement procedure: each maximal constant-sign
    dyadic interval keeps its first and third quarters when positive and
    its second and fourth when negative, with values scaled by 4.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    vals = [Fraction(4), Fraction(4), Fraction(-4), Fraction(-4)]
    for _ in range(n - 1):
        fine = []
        for v in vals:
            fine.extend([4 * v] * 4)
        # locate maximal constant-sign runs in the refined vector
        out = [ZERO] * len(fine)
        i = 0
        while i < len(fine):
            if fine[i] == 0:
                i += 1
                continue
            j = i
            while j < len(fine) and fine[j] == fine[i]:
                j += 1
            quarter = (j - i) // 4
            if fine[i] > 0:
                picks = [(i, i + quarter), (i + 2 * quarter, i + 3 * quarter)]
            else:
                picks = [(i + quarter, i + 2 * quarter), (i + 3 * quarter, j)]
            for a, b in picks:
                for t in range(a, b):
                    out[t] = fine[i]
            i = j
        vals = out
    return DyadicVector(tuple(vals))


def even_level_basis(n: int) -> list[HaarIndex]:
    """Indices of the even Haar levels 0, 2, ..., 2n-2 (the cycle space)."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    out = []
    for k in range(n):
        out.extend(HaarIndex.from_flat(i) for i in level_indices(2 * k))
    return out


def even_level_vectors(n: int) -> list[DyadicVector]:
    return [haar(ix.flat, 2 * n) for ix in even_level_basis(n)]


def verify_even_level_span(n: int, graph: TwoPoleGraph | None = None) -> bool:
    """Exact span equality of graph Z(D_n) and the even Haar levels.

    The fundamental cycle vectors are independent by construction and there
    are exactly as many as even-level Haar functions, so equality follows
    from every cycle image being orthogonal to the complementary system
    (h_0 and the odd levels).
    """
    g = graph if graph is not None else diamond(n)
    basis = fundamental_cycle_basis(g)
    expected = (4 ** n - 1) // 3
    if len(basis.vectors) != expected or len(even_level_basis(n)) != expected:
        return False
    complement = [haar(0, 2 * n)]
    for k in range(1, n + 1):
        complement.extend(haar(i, 2 * n) for i in level_indices(2 * k - 1))
    for vec in basis.vectors:
        img = graph_to_dyadic(vec, n)
        for h in complement:
            if img.inner(h) != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# Andrew averaging and the projection lower bounds
# ---------------------------------------------------------------------------

def g_isometry(i: int, resolution: int) -> list:
    """Permutation matrix swapping the two halves of supp h_i (i >= 1)."""
    if i < 1:
        raise ValidationError("g_i is defined for i >= 1")
    cells = 2 ** resolution
    idx = HaarIndex.from_flat(i)
    if idx.level + 1 > resolution:
        raise ResolutionTooCoarse(f"g_{i} needs resolution >= {idx.level + 1}")
    block = cells // 2 ** idx.level
    half = block // 2
    start = idx.position * block
    perm = list(range(cells))
    for t in range(start, start + half):
        perm[t], perm[t + half] = perm[t + half], perm[t]
    return projections.permutation_matrix(perm)


def level_span_vectors(levels, resolution: int) -> list[DyadicVector]:
    out = []
    for lev in sorted(levels):
        out.extend(haar(i, resolution) for i in level_indices(lev))
    return out


def orthogonal_projection_matrix(vectors: list[DyadicVector]) -> list:
    return projections.orthogonal_projection([list(v.values) for v in vectors])


def andrew_lower_bound(levels, resolution: int, norm_mode: str = "L1",
                       projection: list | None = None,
                       average_check: bool = False,
                       group_cap: int = 10 ** 6):
    """Norm of the orthogonal projection onto span of the given Haar levels.

    This is a certified lower bound on the norm of every projection onto
    that span, in either the L1 or Linf norm.  With average_check and a
    concrete projection supplied, the full reflection group is enumerated
    and the average is confirmed to equal the orthogonal projection.
    """
    if norm_mode not in ("L1", "Linf"):
        raise ValidationError("norm_mode must be 'L1' or 'Linf'")
    vecs = level_span_vectors(levels, resolution)
    p_y = orthogonal_projection_matrix(vecs)
    bound = projections.l1_norm(p_y) if norm_mode == "L1" else projections.linf_norm(p_y)
    averaged = None
    if average_check:
        if projection is None:
            raise ValidationError("average_check needs a concrete projection")
        gens = [g_isometry(i, resolution) for i in range(1, 2 ** resolution)]
        group = projections.generate_group(gens, cap=group_cap)
        averaged = projections.average_projection(projection, group)
        if not linalg.mat_eq(averaged, p_y):
            raise ValidationError("group average differs from the orthogonal projection")
    return bound, p_y, averaged


def haar_witness_bound(n: int):
    """The Andrew witness: f sums the first L1-normalized Haar function of
    each level through 2n-2, plus h_0.

    Returns (f, ||f||_1, Qf, ||Qf||_1) with Q the orthogonal projection onto
    the even levels; ||f||_1 = 1 exactly and ||Qf||_1 >= (2n+1)/3.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    resolution = 2 * n - 1
    f = haar(0, resolution)
    qf = DyadicVector((ZERO,) * 2 ** resolution)
    for k in range(2 * n - 1):
        term = haar(2 ** k, resolution).scale(2 ** k)
        f = f + term
        if k % 2 == 0:
            qf = qf + term
    return f, f.l1(), qf, qf.l1()


def _coset_scalings(n: int):
    """The coset basis of Theorem-6.4 type: (flat index, scaling) pairs.

    h_0 with scaling 1 and each odd-level h_i with scaling 2^(2k-1) for
    level 2k-1, the normalization that makes the system 2-equivalent to the
    l1 unit vector basis in the quotient norm.
    """
    out = [(0, Fraction(1))]
    for k in range(1, n + 1):
        lev = 2 * k - 1
        for i in level_indices(lev):
            out.append((i, Fraction(2 ** lev)))
    return out


def diamond_bm_bounds(n: int, include_upper: bool = True):
    """Certified Banach-Mazur bounds for LF(D_n) against l1 of its dimension.

    lower: (2n+1)/3, certified by the exact Linf norm of the orthogonal
    projection onto the cut space (h_0 and the odd levels).
    upper: ||T|| ||T^-1|| of the scaled odd-level coset basis map, computed
    through one quotient-norm LP per coset basis vector; at most 4n + 4.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    resolution = 2 * n
    cells = 4 ** n
    cut_levels = [-1] + [2 * k - 1 for k in range(1, n + 1)]
    cut_vecs = level_span_vectors(cut_levels, resolution)
    p_cut = orthogonal_projection_matrix(cut_vecs)
    exact_cut_norm = projections.linf_norm(p_cut)
    lower = Fraction(2 * n + 1, 3)
    if exact_cut_norm < lower:
        raise ValidationError("cut projection norm fell below the paper bound")
    result = {
        "lower": lower,
        "exact_orth_norm": exact_cut_norm,
        "upper": None,
        "t_norm": None,
        "tinv_norm": None,
    }
    if not include_upper:
        return result
    zcols = [list(v.values) for v in even_level_vectors(n)]
    coset = _coset_scalings(n)
    # ||T||: expand each edge vector in the Haar system; one coefficient per
    # level survives, scaled down by the coset normalization.
    t_norm = ZERO
    scaling = dict(coset)
    for cell in range(cells):
        vals = [ZERO] * cells
        vals[cell] = Fraction(cells)
        coeffs = haar_coefficients(DyadicVector(tuple(vals)))
        total = ZERO
        for i, c in coeffs.items():
            if i in scaling:
                total += abs(c) / scaling[i]
        t_norm = max(t_norm, total)
    tinv_norm = ZERO
    for i, s in coset:
        rep = [s * v for v in haar(i, resolution).values]
        val, _ = simplex.min_l1_combination(rep, zcols, mode="exact")
        tinv_norm = max(tinv_norm, val / cells)  # LP uses counting norm, L1 is the mean
    result["upper"] = t_norm * tinv_norm
    result["t_norm"] = t_norm
    result["tinv_norm"] = tinv_norm
    return result


# ---------------------------------------------------------------------------
# Multibranching diamonds
# ---------------------------------------------------------------------------

def multibranch_cell_index(edge_id: str, n: int, k: int) -> int:
    """Cell of an edge of D_{n,k}: base-2k digits, path j descending edge
    at digit 2j-2 and ascending edge at digit 2j-1."""
    parts = edge_id.split("/") if edge_id else []
    if len(parts) != n:
        raise ValidationError(f"edge id {edge_id!r} is not at level {n}")
    idx = 0
    for seg in parts:
        j = int(seg[1:-1])
        digit = 2 * j - 2 if seg.endswith("d") else 2 * j - 1
        idx = 2 * k * idx + digit
    return idx


def multibranch_graph_to_dyadic(x: EdgeVector, n: int, k: int) -> DyadicVector:
    cells = (2 * k) ** n
    vals = [ZERO] * cells
    for eid, c in x.coeffs.items():
        vals[multibranch_cell_index(eid, n, k)] = Fraction(cells) * c
    return DyadicVector(tuple(vals))


def multibranch_cut_basis(n: int, k: int) -> list[DyadicVector]:
    """h_0 together with the Linf-normalized difference vectors h_{i,j}."""
    cells = (2 * k) ** n
    out = [DyadicVector((Fraction(1),) * cells)]
    for i in range(1, n + 1):
        block = cells // (2 * k) ** i
        for j in range(1, (2 * k) ** i // 2 + 1):
            vals = [ZERO] * cells
            start = (2 * j - 2) * block
            for t in range(start, start + block):
                vals[t] = Fraction(1)
            for t in range(start + block, start + 2 * block):
                vals[t] = Fraction(-1)
            out.append(DyadicVector(tuple(vals)))
    return out


def multibranch_analysis(n: int, k: int, cell_cap: int = 4096,
                         include_upper: bool = True) -> dict:
    """Cut-space projection data and Banach-Mazur bounds for D_{n,k}.

    Builds the orthogonal projection onto the cut space, evaluates it on
    the first edge vector (the paper's witness), certifies the
    (1 - 1/k) n/2 lower bound, cross-validates the cut space as the
    orthogonal complement of the graph cycle space, and (optionally, it is
    the expensive part) computes the normalized coset-basis upper bound.
    """
    if n < 1 or k < 2:
        raise ValidationError("need n >= 1 and k >= 2")
    cells = (2 * k) ** n
    if cells > cell_cap:
        raise ResourceLimit(f"grid of {cells} cells exceeds the cap")
    cut = multibranch_cut_basis(n, k)
    p = orthogonal_projection_matrix(cut)
    if not linalg.is_idempotent(p) or not linalg.is_symmetric(p):
        raise ValidationError("cut projection failed idempotence/self-adjointness")

    e1 = [ZERO] * cells
    e1[0] = Fraction(cells)
    pe1 = DyadicVector(tuple(linalg.mat_vec(p, e1)))
    # paper formula: P e_{n,1} = h_0 + (1/2) sum (2k)^i h_{i,1}
    formula = cut[0]
    offset = 1
    for i in range(1, n + 1):
        formula = formula + cut[offset].scale(Fraction((2 * k) ** i, 2))
        offset += (2 * k) ** i // 2
    witness_value = pe1.l1()
    bm_lower = Fraction((k - 1) * n, 2 * k)
    if witness_value < bm_lower:
        raise ValidationError("witness value fell below the paper bound")

    # cycle side: graph fundamental cycles land in the orthogonal complement
    g = multidiamond(n, k)
    cycle_imgs = [multibranch_graph_to_dyadic(v, n, k)
                  for v in fundamental_cycle_basis(g).vectors]
    for img in cycle_imgs:
        for w in cut:
            if img.inner(w) != 0:
                raise ValidationError("cycle image not orthogonal to the cut space")
    if len(cycle_imgs) + len(cut) != cells:
        raise ValidationError("cut + cycle dimensions do not fill the edge space")

    # upper bound: coset basis normalized by quotient norms; ||T^-1|| = 1
    t_norm = None
    if include_upper:
        zcols = [list(v.values) for v in cycle_imgs]
        t_norm = ZERO
        qnorms = []
        for w in cut:
            val, _ = simplex.min_l1_combination(list(w.values), zcols, mode="exact")
            qnorms.append(val / cells)  # LP uses counting norm, L1 is the mean
        for cell in range(cells):
            vals = [ZERO] * cells
            vals[cell] = Fraction(cells)
            ev = DyadicVector(tuple(vals))
            total = ZERO
            for w, q in zip(cut, qnorms):
                c = ev.inner(w) / w.inner(w)
                if c:
                    total += abs(c) * q
            t_norm = max(t_norm, total)
    return {
        "cut_basis": cut,
        "projection": p,
        "witness_vector": pe1,
        "witness_formula_matches": pe1.values == formula.values,
        "witness_value": witness_value,
        "linf_bound": projections.linf_norm(p),
        "bm_lower": bm_lower,
        "bm_upper": t_norm,
        "cycle_dim": len(cycle_imgs),
    }
