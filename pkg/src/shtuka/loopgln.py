"""Decompositions and sigma-conjugacy invariants of GL_n loop-group elements.

Operations on matrices over F_{q^m}((z)): the Hodge point via elementary
divisors, the determinant-valuation Kottwitz invariant, Newton points from
the z-adic Newton polygon of the characteristic polynomial of the s-fold
norm, Iwahori cell recovery by legal Gaussian elimination, the block
Iwahori decomposition, and subgroup membership tests with explicit
precision requirements.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import (NotInSubgroup, PrecisionLoss, PreconditionError,
                     Singular)
from .laurent import INF, LaurentMatrix, Series
from .rootdata import Pi1Class, RootDatum
from .weyl import AffineWeyl, AffineWeylElement, from_perm_times_translation


# -- parabolic data ------------------------------------------------------------


@dataclass(frozen=True)
class ParabolicSpec:
    """A partition Phi = Phi_M | Phi_N | Phi_Nbar.

    For GL_n the parabolic is stored as ordered index blocks (a partition
    of 0..n-1, blocks listed in decreasing-slope order); non-standard
    parabolics simply carry non-consecutive blocks.  Root sets are derived.
    Generic root data can supply root sets directly (predicate-only use;
    the matrix layer requires blocks).
    """

    rank: int
    blocks: tuple | None
    phi_m: frozenset
    phi_n: frozenset

    @property
    def phi_nbar(self):
        return frozenset(tuple(-x for x in a) for a in self.phi_n)

    @staticmethod
    def from_blocks(n: int, blocks) -> "ParabolicSpec":
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(n)):
            raise PreconditionError("blocks must partition 0..n-1")
        owner = {}
        for bi, b in enumerate(blocks):
            for i in b:
                owner[i] = bi
        phi_m, phi_n = set(), set()
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                a = tuple(1 if k == i else (-1 if k == j else 0)
                          for k in range(n))
                if owner[i] == owner[j]:
                    phi_m.add(a)
                elif owner[i] < owner[j]:
                    phi_n.add(a)
        return ParabolicSpec(n, blocks, frozenset(phi_m), frozenset(phi_n))

    @staticmethod
    def standard(n: int, sizes) -> "ParabolicSpec":
        sizes = tuple(int(s) for s in sizes)
        if sum(sizes) != n:
            raise PreconditionError("block sizes must sum to n")
        blocks = []
        at = 0
        for s in sizes:
            blocks.append(tuple(range(at, at + s)))
            at += s
        return ParabolicSpec.from_blocks(n, blocks)

    @staticmethod
    def from_root_sets(rank: int, phi_m, phi_n) -> "ParabolicSpec":
        return ParabolicSpec(rank, None, frozenset(map(tuple, phi_m)),
                             frozenset(map(tuple, phi_n)))

    def conjugated(self, perm) -> "ParabolicSpec":
        """Image blocks under w^{-1} . w, i.e. indices mapped through w^{-1}."""
        if self.blocks is None:
            raise PreconditionError("no block data to conjugate")
        inv = [0] * self.rank
        for j, i in enumerate(perm):
            inv[i] = j
        return ParabolicSpec.from_blocks(
            self.rank, [tuple(inv[i] for i in b) for b in self.blocks])

    def block_of(self):
        owner = {}
        for bi, b in enumerate(self.blocks):
            for i in b:
                owner[i] = bi
        return owner

    def is_standard(self) -> bool:
        if self.blocks is None:
            return False
        at = 0
        for b in self.blocks:
            if list(b) != list(range(at, at + len(b))):
                return False
            at += len(b)
        return True


@dataclass(frozen=True)
class SigmaInvariants:
    """The classifying pair: dominant Newton point and Kottwitz degree."""

    newton: tuple
    kappa: int

    def __post_init__(self):
        if sum(self.newton) != self.kappa:
            raise PreconditionError(
                "Newton point and kappa have different pi_1 images")


# -- subgroup specs --------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupSpec:
    """K_n, I_n, I, or I_M/I_N/I_Nbar of a parabolic, optionally conjugated
    by a power of an affine Weyl element."""

    kind: str                   # "K", "I_n", "I", "I_M", "I_N", "I_Nbar"
    level: int = 0              # the n in K_n / I_n
    parabolic: ParabolicSpec | None = None
    conjugator: AffineWeylElement | None = None
    power: int = 0              # spec means  x^power * base * x^{-power}

    @staticmethod
    def K(n: int) -> "SubgroupSpec":
        return SubgroupSpec("K", n)

    @staticmethod
    def I(n: int = 0) -> "SubgroupSpec":
        return SubgroupSpec("I_n", n) if n else SubgroupSpec("I")

    @staticmethod
    def I_M(p: ParabolicSpec) -> "SubgroupSpec":
        return SubgroupSpec("I_M", 0, p)

    @staticmethod
    def I_N(p: ParabolicSpec) -> "SubgroupSpec":
        return SubgroupSpec("I_N", 0, p)

    @staticmethod
    def I_Nbar(p: ParabolicSpec) -> "SubgroupSpec":
        return SubgroupSpec("I_Nbar", 0, p)

    def conjugate_by(self, x: AffineWeylElement, power: int) -> "SubgroupSpec":
        return SubgroupSpec(self.kind, self.level, self.parabolic, x, power)

    def required_precision(self) -> int:
        base = {"K": self.level, "I_n": self.level + 2, "I": 2,
                "I_M": 2, "I_N": 2, "I_Nbar": 2}[self.kind]
        if self.conjugator is not None:
            shift = max(abs(v) for v in
                        (self.conjugator ** self.power).translation) \
                if self.power else 0
            base += shift + 1
        return base


def subgroup_member(g: LaurentMatrix, spec: SubgroupSpec) -> bool:
    """Exact membership; raises PrecisionLoss when the matrix does not carry
    enough digits to decide."""
    if spec.conjugator is not None and spec.power:
        x = spec.conjugator ** (-spec.power)
        xm = LaurentMatrix.from_weyl(g.field, x)
        xmi = LaurentMatrix.from_weyl(g.field, x.inverse())
        g = xm * g * xmi
        spec = SubgroupSpec(spec.kind, spec.level, spec.parabolic)
    n = g.n
    if spec.kind == "K":
        return _entries_congruent_identity(g, spec.level)
    if spec.kind == "I_n":
        if not _entries_congruent_identity(g, spec.level):
            return False
        return _lower_valuations_at_least(g, spec.level + 1)
    if spec.kind == "I":
        return _is_iwahori(g)
    p = spec.parabolic
    if p is None or p.blocks is None:
        raise PreconditionError("parabolic spec with blocks required")
    owner = p.block_of()
    if spec.kind == "I_M":
        if not _is_iwahori(g):
            return False
        return _supported_on(g, lambda i, j: owner[i] == owner[j])
    if spec.kind in ("I_N", "I_Nbar"):
        want_off = ((lambda i, j: owner[i] < owner[j]) if spec.kind == "I_N"
                    else (lambda i, j: owner[i] > owner[j]))
        for i in range(n):
            for j in range(n):
                e = g.entry(i, j)
                if i == j:
                    d = e - Series.one(g.field)
                    if not d.is_zero_known():
                        return False
                    if d.prec < INF and d.prec < _OFFDIAG_DECIDE:
                        raise PrecisionLoss("diagonal digits missing")
                elif want_off(i, j):
                    v = e.valuation_floor()
                    need = 0 if i < j else 1
                    if v < need:
                        return False
                else:
                    if not e.is_zero_known():
                        return False
                    if e.prec < INF and e.prec < _OFFDIAG_DECIDE:
                        raise PrecisionLoss("off-support digits missing")
        return True
    raise PreconditionError(f"unknown subgroup kind {spec.kind}")


_OFFDIAG_DECIDE = 1  # unipotents are decided once one digit is visible


def _entries_congruent_identity(g: LaurentMatrix, n_level: int) -> bool:
    one = Series.one(g.field)
    for i in range(g.n):
        for j in range(g.n):
            e = g.entry(i, j) - (one if i == j else Series.zero(g.field))
            if e.prec < n_level:
                raise PrecisionLoss(
                    f"need precision {n_level} to test K_{n_level}")
            v = e.valuation()
            if v is not None and v < n_level:
                return False
    return True


def _lower_valuations_at_least(g: LaurentMatrix, need: int) -> bool:
    for i in range(g.n):
        for j in range(i):
            e = g.entry(i, j)
            if e.prec < need:
                raise PrecisionLoss("lower-triangular digits missing")
            v = e.valuation()
            if v is not None and v < need:
                return False
    return True


def _is_iwahori(g: LaurentMatrix) -> bool:
    n = g.n
    for i in range(n):
        for j in range(n):
            e = g.entry(i, j)
            need = 1 if i > j else 0
            if e.prec < need + 1 and not (e.prec == INF):
                if e.prec < need:
                    raise PrecisionLoss("Iwahori membership undecidable")
            v = e.valuation()
            if v is not None and v < need:
                return False
            if i == j:
                if e.prec < 1:
                    raise PrecisionLoss("diagonal unit test undecidable")
                if e.coeffs.get(0, 0) == 0:
                    return False
    return True


def _supported_on(g: LaurentMatrix, pred) -> bool:
    for i in range(g.n):
        for j in range(g.n):
            if i != j and not pred(i, j):
                if not g.entry(i, j).is_zero_known():
                    return False
    return True


# -- invariants -------------------------------------------------------------------


def elementary_divisors(g: LaurentMatrix) -> tuple:
    """Exponents of the z-elementary divisors, non-decreasing."""
    n = g.n
    if n == 2:
        entries = [e for r in g.rows for e in r]
        known = [e.valuation() for e in entries if e.valuation() is not None]
        if not known:
            if all(e.is_exact_zero() for e in entries):
                raise Singular("matrix has vanishing elementary divisor")
            raise PrecisionLoss("2x2 divisor data indeterminate")
        vmin = min(known)
        for e in entries:
            if e.valuation() is None and not e.is_exact_zero() \
                    and e.prec <= vmin:
                raise PrecisionLoss("2x2 divisor data indeterminate")
        det = g.rows[0][0] * g.rows[1][1] - g.rows[0][1] * g.rows[1][0]
        dv = det.valuation()
        if dv is None:
            if det.is_exact_zero():
                raise Singular("matrix has vanishing elementary divisor")
            raise PrecisionLoss("2x2 determinant valuation indeterminate")
        return (vmin, dv - vmin)
    shift = 0
    floor = g.min_valuation_floor()
    if floor < 0:
        shift = -floor
        g = LaurentMatrix(g.field, [[e.shift(shift) for e in r]
                                    for r in g.rows])
    work = [list(r) for r in g.rows]
    divisors = []
    rows_left = list(range(n))
    cols_left = list(range(n))
    while rows_left:
        piv_val, piv = None, None
        for i in rows_left:
            for j in cols_left:
                v = work[i][j].valuation()
                if v is not None and (piv_val is None or v < piv_val
                                      or (v == piv_val and (i, j) < piv)):
                    piv_val, piv = v, (i, j)
        if piv is None:
            if all(work[i][j].is_exact_zero()
                   for i in rows_left for j in cols_left):
                raise Singular("matrix has vanishing elementary divisor")
            raise PrecisionLoss("Smith pivot beyond known precision")
        for i in rows_left:
            for j in cols_left:
                e = work[i][j]
                if not e.is_zero_known() and e.prec <= piv_val:
                    raise PrecisionLoss("Smith pivot candidate undecidable")
        pi, pj = piv
        # divide by the unit part only; the z^v shift costs no digits
        unit_inv = work[pi][pj].shift(-piv_val).inverse()
        for i in rows_left:
            if i != pi:
                c = work[i][pj]
                if not c.is_zero_known():
                    f = (c * unit_inv).shift(-piv_val)
                    for j in cols_left:
                        work[i][j] = work[i][j] - f * work[pi][j]
        for j in cols_left:
            if j != pj:
                c = work[pi][j]
                if not c.is_zero_known():
                    f = (c * unit_inv).shift(-piv_val)
                    for i in rows_left:
                        work[i][j] = work[i][j] - work[i][pj] * f
        divisors.append(piv_val - shift)
        rows_left.remove(pi)
        cols_left.remove(pj)
    return tuple(sorted(divisors))


def hodge_point(g: LaurentMatrix) -> tuple:
    """The dominant coweight mu with g in K_0 z^mu K_0."""
    return tuple(sorted(elementary_divisors(g), reverse=True))


def kottwitz(g: LaurentMatrix) -> int:
    """Valuation of the determinant."""
    d = g.det()
    v = d.valuation()
    if v is None:
        if d.is_exact_zero():
            raise Singular("determinant is zero")
        raise PrecisionLoss("determinant valuation indeterminate")
    return v


def kottwitz_class_of(g: LaurentMatrix) -> Pi1Class:
    datum = RootDatum.gl(g.n)
    v = kottwitz(g)
    mu = (0,) * (g.n - 1) + (v,)
    return datum.kottwitz_class(mu)


def newton_point(g: LaurentMatrix) -> tuple:
    """Dominant rational Newton point of the twisted operator g*sigma,
    read off the z-adic Newton polygon of char(norm_m(g))."""
    m = g.field.m
    nm = g.norm(m) if m > 1 else g
    coeffs = nm.charpoly()
    n = g.n
    pts = []           # (i, val) for determinate coefficients
    floors = []        # (i, lower bound) for known-zero truncated ones
    for i, c in enumerate(coeffs):
        v = c.valuation()
        if v is not None:
            pts.append((i, v))
        elif c.prec != INF:
            floors.append((i, c.prec))
    if not any(i == 0 for i, _ in pts):
        raise PrecisionLoss("constant charpoly coefficient indeterminate")
    hull = _lower_hull(pts)
    for i, bound in floors:
        if bound < _hull_value(hull, i):
            raise PrecisionLoss("charpoly coefficient too uncertain for hull")
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y1 - y2, x2 - x1)
        slopes.extend([s] * (x2 - x1))
    if len(slopes) != n:
        raise PreconditionError("Newton polygon does not span the degree")
    slopes.sort(reverse=True)
    return tuple(s / m for s in slopes)


def _lower_hull(pts):
    pts = sorted(pts)
    hull = []
    for p in pts:
        while len(hull) >= 2 and _turns_up(hull[-2], hull[-1], p):
            hull.pop()
        hull.append(p)
    return hull


def _turns_up(a, b, c):
    return (b[1] - a[1]) * (c[0] - a[0]) >= (c[1] - a[1]) * (b[0] - a[0])


def _hull_value(hull, x):
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + Fraction(y2 - y1, x2 - x1) * (x - x1)
    return hull[-1][1] if hull else 0


def newton_point_hodge_limit(g: LaurentMatrix, s: int) -> tuple:
    """The stabilized Hodge quotient (hodge(norm_{2s}) - hodge(norm_s))/s.

    The raw quotient hodge(norm_s)/s converges to the Newton point but
    carries a bounded drift that need not vanish at finite s; differencing
    two anchors cancels the drift once the divisor pattern has stabilized,
    which happens by s = n! * m on bounded elements.
    """
    ns = g.norm(s)
    n2s = ns * ns.sigma_pow(s)
    h1 = hodge_point(ns)
    h2 = hodge_point(n2s)
    return tuple(Fraction(a - b, s) for a, b in zip(h2, h1))


def newton_point_hodge_quotient(g: LaurentMatrix, s: int) -> tuple:
    """The raw quotient hodge(norm_s(g))/s (converges to the Newton point
    from above in the dominance order)."""
    hp = hodge_point(g.norm(s))
    return tuple(Fraction(v, s) for v in hp)


def sigma_invariants(g: LaurentMatrix) -> SigmaInvariants:
    return SigmaInvariants(newton_point(g), kottwitz(g))


def mazur_check(g: LaurentMatrix) -> bool:
    """Newton below Hodge with matching pi_1 image; always true for honest
    inputs, so a False signals an arithmetic bug upstream."""
    datum = RootDatum.gl(g.n)
    nu = newton_point(g)
    mu = hodge_point(g)
    if sum(nu) != sum(mu):
        return False
    return datum.dominance_leq(nu, tuple(Fraction(x) for x in mu))


# -- Iwahori cells ------------------------------------------------------------------


def iwahori_cell(g: LaurentMatrix, witnesses: bool = False):
    """The unique x in the extended affine Weyl group with g in I x I.

    Elimination uses only Iwahori-legal row and column operations; pivots
    are the globally minimal-valuation entries, bottom-most row first and
    then left-most column, which keeps every clearing coefficient legal.
    With ``witnesses`` also returns (i1, i2) in I x I with g = i1 * x * i2.
    """
    n = g.n
    f = g.field
    work = [list(r) for r in g.rows]
    left_inv = LaurentMatrix.identity(f, n) if witnesses else None
    right_inv = LaurentMatrix.identity(f, n) if witnesses else None
    rows_left = set(range(n))
    cols_left = set(range(n))
    perm = [0] * n
    lam = [0] * n
    units = {}
    for _ in range(n):
        piv, piv_val = None, None
        for i in rows_left:
            for j in cols_left:
                v = work[i][j].valuation()
                if v is None:
                    continue
                if (piv_val is None or v < piv_val
                        or (v == piv_val and (i > piv[0]
                                              or (i == piv[0] and j < piv[1])))):
                    piv, piv_val = (i, j), v
        if piv is None:
            if all(work[i][j].is_exact_zero()
                   for i in rows_left for j in cols_left):
                raise Singular("matrix not invertible over the Laurent field")
            raise PrecisionLoss("Iwahori pivot beyond known precision")
        for i in rows_left:
            for j in cols_left:
                e = work[i][j]
                if e.valuation() is None and not e.is_exact_zero() \
                        and e.prec <= piv_val:
                    raise PrecisionLoss("Iwahori pivot candidate undecidable")
        pi, pj = piv
        inv_piv = work[pi][pj].inverse()
        for i in rows_left:
            if i == pi:
                continue
            c = work[i][pj]
            if c.is_zero_known():
                continue
            factor = c * inv_piv
            fv = factor.valuation()
            if fv is not None and fv < (0 if i < pi else 1):
                raise PreconditionError("illegal row clearing op")
            for j in range(n):
                work[i][j] = work[i][j] - factor * work[pi][j]
            if witnesses:
                # left_inv <- left_inv * (1 + factor * E_{i,pi})
                li = [list(r) for r in left_inv.rows]
                for r in range(n):
                    li[r][pi] = li[r][pi] + left_inv.rows[r][i] * factor
                left_inv = LaurentMatrix(f, li)
        for j in cols_left:
            if j == pj:
                continue
            c = work[pi][j]
            if c.is_zero_known():
                continue
            factor = inv_piv * c
            fv = factor.valuation()
            if fv is not None and fv < (0 if pj < j else 1):
                raise PreconditionError("illegal column clearing op")
            for i in range(n):
                work[i][j] = work[i][j] - work[i][pj] * factor
            if witnesses:
                # right_inv <- (1 + factor * E_{pj,j}) * right_inv
                ri = [list(r) for r in right_inv.rows]
                for c2 in range(n):
                    ri[pj][c2] = ri[pj][c2] + factor * right_inv.rows[j][c2]
                right_inv = LaurentMatrix(f, ri)
        perm[pj] = pi
        lam[pi] = piv_val
        units[(pi, pj)] = work[pi][pj]
        rows_left.remove(pi)
        cols_left.remove(pj)
    x = from_perm_times_translation(tuple(perm), [lam[perm[j]] for j in range(n)])
    if not witnesses:
        return x
    # fold the unit leading coefficients into the right witness
    diag = [None] * n
    for (pi, pj), u in units.items():
        diag[pj] = u.shift(-lam[pi])
    scale = LaurentMatrix(f, [[diag[i] if i == j else Series.zero(f)
                               for j in range(n)] for i in range(n)])
    i2 = scale * right_inv
    return x, left_inv, i2


def iwahori_decompose(g: LaurentMatrix, p: ParabolicSpec,
                      conj: AffineWeylElement | None = None,
                      conj_power: int = 0):
    """Unique triple (n, m, nbar) with g = n*m*nbar, n in K_N, m in K_M,
    nbar in K_Nbar, for K = I or K = I  intersected with a conjugate
    x^l I x^{-l}; the factors land in the deeper subgroups automatically."""
    if p.blocks is None:
        raise PreconditionError("block data required for decomposition")
    ispec = SubgroupSpec.I()
    if not subgroup_member(g, ispec):
        raise NotInSubgroup("element is not in the Iwahori subgroup")
    f = g.field
    n = g.n
    owner = p.block_of()
    work = [list(r) for r in g.rows]
    n_acc = LaurentMatrix.identity(f, n)
    nbar_acc = LaurentMatrix.identity(f, n)
    e = len(p.blocks)
    for bk in range(e - 1, -1, -1):
        idx = p.blocks[bk]
        sub = [[work[i][j] for j in idx] for i in idx]
        sub_inv = _invert_block(f, sub)
        # clear the N-part above block bk with row operations; the op is
        # work <- (1 - coef*E) work, so  n_acc <- n_acc * (1 + coef*E)
        for bb in range(bk):
            up = p.blocks[bb]
            coef = [[None] * len(idx) for _ in up]
            for a, i in enumerate(up):
                for b in range(len(idx)):
                    acc = Series.zero(f)
                    for c, jj in enumerate(idx):
                        acc = acc + work[i][jj] * sub_inv[c][b]
                    coef[a][b] = acc
            for a, i in enumerate(up):
                for j in range(n):
                    acc = work[i][j]
                    for b, jj in enumerate(idx):
                        acc = acc - coef[a][b] * work[jj][j]
                    work[i][j] = acc
            na = [list(r) for r in n_acc.rows]
            for a, i in enumerate(up):
                for b, jj in enumerate(idx):
                    c = coef[a][b]
                    if not c.is_zero_known():
                        for r in range(n):
                            na[r][jj] = na[r][jj] + n_acc.rows[r][i] * c
            n_acc = LaurentMatrix(f, na)
        # clear the Nbar-part left of block bk with column operations; the
        # op is  work <- work (1 - E*coef), so  nbar_acc <- (1 + E*coef) nbar_acc
        for bb in range(bk):
            left = p.blocks[bb]
            coef = [[None] * len(left) for _ in idx]
            for b in range(len(idx)):
                for a, j in enumerate(left):
                    acc = Series.zero(f)
                    for c, ii in enumerate(idx):
                        acc = acc + sub_inv[b][c] * work[ii][j]
                    coef[b][a] = acc
            for a, j in enumerate(left):
                for i in range(n):
                    acc = work[i][j]
                    for b, ii in enumerate(idx):
                        acc = acc - work[i][ii] * coef[b][a]
                    work[i][j] = acc
            nb = [list(r) for r in nbar_acc.rows]
            for b, ii in enumerate(idx):
                for a, j in enumerate(left):
                    c = coef[b][a]
                    if not c.is_zero_known():
                        for col in range(n):
                            nb[ii][col] = nb[ii][col] + c * nbar_acc.rows[j][col]
            nbar_acc = LaurentMatrix(f, nb)
    m_part = LaurentMatrix(f, work)
    if conj is not None and conj_power:
        ks = SubgroupSpec.I_N(p).conjugate_by(conj, conj_power)
        if not subgroup_member(n_acc, ks):
            raise NotInSubgroup("N-part escaped the conjugated subgroup")
    return n_acc, m_part, nbar_acc


def _invert_block(f, sub):
    k = len(sub)
    m = LaurentMatrix(f, sub)
    return [list(r) for r in m.inverse().rows]


# -- random elements -------------------------------------------------------------


def random_iwahori(field, n, prec, rng) -> LaurentMatrix:
    """Uniform-ish element of I at the given precision."""
    from .laurent import random_series, random_unit_series
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(random_unit_series(field, rng, prec))
            elif i < j:
                row.append(random_series(field, rng, 0, prec))
            else:
                row.append(random_series(field, rng, 1, prec))
        rows.append(row)
    return LaurentMatrix(field, rows)


def random_k0(field, n, prec, rng) -> LaurentMatrix:
    """Element of K_0: resample until the reduction mod z is invertible."""
    from .laurent import random_series
    while True:
        rows = [[random_series(field, rng, 0, prec) for _ in range(n)]
                for _ in range(n)]
        m = LaurentMatrix(field, rows)
        try:
            d = m.det()
        except PrecisionLoss:
            continue
        v = d.valuation()
        if v == 0:
            return m


def random_bounded(field, n, mu, prec, rng) -> LaurentMatrix:
    """k1 * z^{mu'} * k2 for a random dominant mu' below mu."""
    datum = RootDatum.gl(n)
    mus = dominant_mu_below(datum, tuple(mu))
    mu_pick = mus[rng.randrange(len(mus))]
    k1 = random_k0(field, n, prec, rng)
    k2 = random_k0(field, n, prec, rng)
    return k1 * LaurentMatrix.z_diag(field, mu_pick) * k2


def dominant_mu_below(datum: RootDatum, mu) -> list:
    """All dominant integral coweights below mu with the same pi_1 image."""
    n = datum.rank
    total = sum(mu)
    lo = min(mu) - n
    hi = max(mu) + n
    out = []

    def rec(prefix, remaining):
        i = len(prefix)
        if i == n:
            if remaining == 0 and datum.dominance_leq(tuple(prefix), mu):
                out.append(tuple(prefix))
            return
        upper = prefix[-1] if prefix else hi
        for v in range(lo, upper + 1):
            # partial sums must stay below those of mu
            if sum(prefix) + v > sum(mu[: i + 1]):
                continue
            rec(prefix + [v], remaining - v)

    rec([], total)
    return out


def random_unipotent(field, n, positions, lows, prec, rng) -> LaurentMatrix:
    """1 + random entries at ``positions`` with entry (i,j) valuation
    at least ``lows[(i,j)]``."""
    from .laurent import random_series
    m = LaurentMatrix.identity(field, n, prec)
    rows = [list(r) for r in m.rows]
    for (i, j) in positions:
        rows[i][j] = random_series(field, rng, lows[(i, j)], prec)
    return LaurentMatrix(field, rows)


def random_subgroup_element(field, n: int, spec: SubgroupSpec, prec: int,
                            rng) -> LaurentMatrix:
    """A random element of the subgroup described by the spec."""
    from .laurent import random_series, random_unit_series
    base = spec
    if spec.conjugator is not None:
        base = SubgroupSpec(spec.kind, spec.level, spec.parabolic)
    if base.kind == "K":
        if base.level == 0:
            g = random_k0(field, n, prec, rng)
        else:
            one = Series.one(field, prec)
            g = LaurentMatrix(field, [
                [random_series(field, rng, base.level, prec)
                 + (one if i == j else Series.zero(field, prec))
                 for j in range(n)] for i in range(n)])
    elif base.kind in ("I", "I_n"):
        lvl = base.level if base.kind == "I_n" else 0
        rows = []
        one = Series.one(field, prec)
        for i in range(n):
            row = []
            for j in range(n):
                if i == j:
                    if lvl:
                        row.append(one + random_series(field, rng, lvl, prec))
                    else:
                        row.append(random_unit_series(field, rng, prec))
                elif i < j:
                    row.append(random_series(field, rng, lvl, prec))
                else:
                    row.append(random_series(field, rng, lvl + 1, prec))
            rows.append(row)
        g = LaurentMatrix(field, rows)
    elif base.kind in ("I_M", "I_N", "I_Nbar"):
        p = base.parabolic
        owner = p.block_of()
        if base.kind == "I_M":
            rows = []
            for i in range(n):
                row = []
                for j in range(n):
                    if i == j:
                        row.append(random_unit_series(field, rng, prec))
                    elif owner[i] == owner[j]:
                        low = 0 if i < j else 1
                        row.append(random_series(field, rng, low, prec))
                    else:
                        row.append(Series.zero(field))
                rows.append(row)
            g = LaurentMatrix(field, rows)
        else:
            want = (lambda i, j: owner[i] < owner[j]) if base.kind == "I_N" \
                else (lambda i, j: owner[i] > owner[j])
            positions = [(i, j) for i in range(n) for j in range(n)
                         if i != j and want(i, j)]
            lows = {(i, j): (0 if i < j else 1) for (i, j) in positions}
            g = random_unipotent(field, n, positions, lows, prec, rng)
    else:
        raise PreconditionError(f"cannot sample from {base.kind}")
    if spec.conjugator is not None and spec.power:
        x = spec.conjugator ** spec.power
        xm = LaurentMatrix.from_weyl(field, x)
        xmi = LaurentMatrix.from_weyl(field, x.inverse())
        g = xm * g * xmi
    return g


# -- conjugation bound ---------------------------------------------------------------


def conjugation_bound(datum: RootDatum, mu) -> int:
    """Least e with h I_{n+e} h^{-1} inside I_n for every h bounded by mu."""
    if not datum.is_dominant(mu):
        raise PreconditionError("mu must be dominant")
    best = 0
    for a in datum.roots():
        best = max(best, datum.pair(a, mu))
    return int(best) + 1
