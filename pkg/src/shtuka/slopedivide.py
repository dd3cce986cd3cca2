"""Slope division, unipotent trivialization, and slope-divisibility checkers.

slope_division conjugates g in IxI into x * I_M * I_Nbar by the
contraction iteration: split the tail in the Iwahori decomposition of
I meet x^l I x^{-l}, absorb the N-factor into the conjugator, repeat.
Each round pushes the N-residue one conjugation step deeper, so the
residue converges to 1 z-adically whenever x is fundamental with M the
full centralizer of its Newton vector.

trivialize_unipotent removes the Nbar-tail of x*nbar over a finite field,
where the inverse Frobenius is available: the update solves
sigma(h_step) = y exactly with h_step = sigma^{-1}(y).
"""

from dataclasses import dataclass

from .alcove import centralizer_parabolic_of_vector, is_p_fundamental
from .errors import (NotFundamental, NotInCell, NotUnipotentPart,
                     PrecisionLoss, PreconditionError)
from .laurent import INF, LaurentMatrix, Series
from .loopgln import (ParabolicSpec, SubgroupSpec, iwahori_cell,
                      iwahori_decompose, subgroup_member)
from .rootdata import RootDatum, _dot
from .weyl import AffineWeyl, AffineWeylElement


@dataclass
class SlopeDivisionResult:
    conjugator: LaurentMatrix          # h, an Iwahori element
    levi_part: LaurentMatrix           # m in I_M
    lower_part: LaurentMatrix          # nbar in I_Nbar
    target_precision: int
    iterations: int
    residual_valuation: int | float


@dataclass
class LocalShtukaData:
    """Trivialized Frobenius matrix with its slope filtration data."""

    frobenius: LaurentMatrix
    block_sizes: tuple
    slopes: tuple                      # integers t_1 > ... > t_e
    period: int

    def __post_init__(self):
        if sum(self.block_sizes) != self.frobenius.n:
            raise PreconditionError("block sizes must sum to the matrix size")
        if list(self.slopes) != sorted(self.slopes, reverse=True) \
                or len(set(self.slopes)) != len(self.slopes):
            raise PreconditionError("slope integers must strictly decrease")
        if self.period < 1:
            raise PreconditionError("period must be positive")


def _require_fundamental(ctx: AffineWeyl, x: AffineWeylElement,
                         p: ParabolicSpec) -> None:
    if not is_p_fundamental(ctx, x, p):
        raise NotFundamental("x is not fundamental for the given parabolic")
    p_cent = centralizer_parabolic_of_vector(ctx.datum, ctx.newton_vector(x))
    if p_cent.blocks is not None and p.blocks is not None:
        if set(p.blocks) != set(p_cent.blocks):
            raise NotFundamental(
                "the Levi must be the full centralizer of the Newton vector")


def _weyl_matrices(field, x: AffineWeylElement):
    return (LaurentMatrix.from_weyl(field, x),
            LaurentMatrix.from_weyl(field, x.inverse()))


def _depth_above_identity(g: LaurentMatrix):
    one = LaurentMatrix.identity(g.field, g.n)
    return g.residual_valuation(one)


def slope_division(g: LaurentMatrix, x: AffineWeylElement, p: ParabolicSpec,
                   d: int, max_rounds: int | None = None) -> SlopeDivisionResult:
    """Find h in I with h^{-1} g sigma(h) = x * m * nbar modulo z^d."""
    if d < 1:
        raise PreconditionError("target precision must be positive")
    datum = RootDatum.gl(g.n)
    ctx = AffineWeyl(datum)
    _require_fundamental(ctx, x, p)
    field = g.field
    xm, xmi = _weyl_matrices(field, x)
    slack = max(0, -min(x.translation))
    stop_depth = d + slack
    # initial split g = h0 * x * c with c in I
    direct = xmi * g
    h = LaurentMatrix.identity(field, g.n)
    try:
        in_i = subgroup_member(direct, SubgroupSpec.I())
    except PrecisionLoss:
        in_i = False
    if in_i:
        c = direct
    else:
        cell, i1, i2 = iwahori_cell(g, witnesses=True)
        if cell != x:
            raise NotInCell("g does not lie in the Iwahori double coset of x")
        h = i1
        c = i2 * i1.sigma()
    denom = max(s.denominator for s in ctx.newton_vector(x))
    cap = max_rounds if max_rounds is not None else 4 * d * denom
    n_piece = m_piece = nbar_piece = None
    rounds = 0
    for level in range(cap + 1):
        n_piece, m_piece, nbar_piece = iwahori_decompose(c, p)
        if level > 0 and not subgroup_member(
                n_piece, SubgroupSpec.I_N(p).conjugate_by(x, level)):
            raise PreconditionError("contraction left its subgroup ladder")
        depth = _depth_above_identity(n_piece)
        if depth >= stop_depth:
            rounds = level
            break
        h = h * (xm * n_piece * xmi)
        twisted = xm * n_piece.sigma() * xmi
        c = m_piece * nbar_piece * twisted
    else:
        raise PreconditionError(
            "slope division exceeded its iteration cap; "
            "is x fundamental with the full centralizer Levi?")
    result = SlopeDivisionResult(h, m_piece, nbar_piece, d, rounds, 0)
    target = xm * m_piece * nbar_piece
    approx = h.inverse() * g * h.sigma()
    res = approx.residual_valuation(target)
    if res < d:
        raise PrecisionLoss(
            f"verified residual valuation {res} below the target {d}; "
            "raise the working precision of g")
    result.residual_valuation = res
    return result


# -- boundedness of Nbar elements -----------------------------------------------


@dataclass
class BoundedExponent:
    exponent: int
    all_levels: bool = False


def _is_nbar_supported(g: LaurentMatrix, p: ParabolicSpec) -> bool:
    owner = p.block_of()
    one = Series.one(g.field)
    for i in range(g.n):
        for j in range(g.n):
            e = g.entry(i, j)
            if i == j:
                if not (e - one).is_zero_known():
                    return False
            elif owner[i] <= owner[j]:
                if not e.is_zero_known():
                    return False
    return True


def _tighten_nbar(g: LaurentMatrix, p: ParabolicSpec) -> LaurentMatrix:
    """Once the Nbar support is verified, the off-support entries are
    structurally zero (and the diagonal structurally one); conjugation by
    monomial matrices preserves the support, so mark them exact."""
    owner = p.block_of()
    field = g.field
    rows = []
    for i in range(g.n):
        row = []
        for j in range(g.n):
            if i == j:
                row.append(Series.one(field))
            elif owner[i] > owner[j]:
                row.append(g.entry(i, j))
            else:
                row.append(Series.zero(field))
        rows.append(row)
    return LaurentMatrix(field, rows)


def bounded_exponent(nbar: LaurentMatrix, x: AffineWeylElement,
                     p: ParabolicSpec, cap: int = 512) -> BoundedExponent:
    """The deepest conjugate x^{-l} I_Nbar x^{l} containing nbar (the
    greatest l with membership; membership is downward-closed in l)."""
    if not _is_nbar_supported(nbar, p):
        raise NotUnipotentPart("matrix is not supported on the Nbar part")
    nbar = _tighten_nbar(nbar, p)
    if _depth_above_identity(nbar) == INF:
        return BoundedExponent(0, all_levels=True)
    field = nbar.field
    xm, xmi = _weyl_matrices(field, x)

    def member(l):
        conj = _conj_power(nbar, xm, xmi, l)
        return subgroup_member(conj, SubgroupSpec.I_Nbar(p))

    if member(0):
        l = 0
        while l < cap and member(l + 1):
            l += 1
        if l >= cap:
            raise PrecisionLoss("membership undecided within the scan cap")
        return BoundedExponent(l)
    l = 0
    while l > -cap:
        l -= 1
        if member(l):
            return BoundedExponent(l)
    raise PrecisionLoss("no containing conjugate within the scan cap; "
                        "valuations too close to the precision boundary")


def _conj_power(g: LaurentMatrix, xm: LaurentMatrix, xmi: LaurentMatrix,
                l: int) -> LaurentMatrix:
    out = g
    if l >= 0:
        for _ in range(l):
            out = xm * out * xmi
    else:
        for _ in range(-l):
            out = xmi * out * xm
    return out


def trivialize_unipotent(nbar: LaurentMatrix, x: AffineWeylElement,
                         p: ParabolicSpec, d: int,
                         max_rounds: int | None = None):
    """h with h^{-1} (x nbar) sigma(h) = x modulo z^d, h in the same
    conjugate of I_Nbar that bounds nbar."""
    datum = RootDatum.gl(nbar.n)
    ctx = AffineWeyl(datum)
    _require_fundamental(ctx, x, p)
    nu = ctx.newton_vector(x)
    for a in sorted(p.phi_nbar):
        if _dot(a, nu) >= 0:
            raise NotFundamental(
                "Nbar slopes must be strictly negative for the contraction")
    if not _is_nbar_supported(nbar, p):
        raise NotUnipotentPart("matrix is not supported on the Nbar part")
    nbar = _tighten_nbar(nbar, p)
    field = nbar.field
    ident = LaurentMatrix.identity(field, nbar.n)
    if _depth_above_identity(nbar) == INF:
        return ident, BoundedExponent(0, all_levels=True), 0
    xm, xmi = _weyl_matrices(field, x)
    slack = max(0, -min(x.translation))
    stop_depth = d + slack
    be = bounded_exponent(nbar, x, p)
    l0 = be.exponent
    y = _conj_power(nbar, xm, xmi, l0)
    h = ident
    denom = max(s.denominator for s in nu)
    cap = max_rounds if max_rounds is not None else 4 * (d + abs(l0)) * denom
    level = l0
    for _ in range(cap + 1):
        resid = _conj_power(y, xm, xmi, -level)
        if _depth_above_identity(resid) >= stop_depth:
            break
        # sigma^{-1}(y): the inverse Frobenius applied coefficientwise
        y_prev = LaurentMatrix(field, [[e.sigma_inv() for e in r]
                                       for r in y.rows])
        step = _conj_power(y_prev.inverse(), xm, xmi, -level)
        h = h * step
        y = y_prev
        level += 1
    else:
        raise PreconditionError("trivialization exceeded its iteration cap")
    target = xm
    approx = h.inverse() * (xm * nbar) * h.sigma()
    res = approx.residual_valuation(target)
    if res < d:
        raise PrecisionLoss(
            f"verified residual valuation {res} below the target {d}")
    if not subgroup_member(h, SubgroupSpec.I_Nbar(p).conjugate_by(x, -l0)):
        raise PreconditionError("conjugator escaped its bounding subgroup")
    return h, be, level - l0


# -- complete slope divisibility -------------------------------------------------


def csd_check_glr(data: LocalShtukaData):
    """Per-condition report of the quotient-filtration checks.

    Condition (a) at level i: every entry in the first D_i rows of the
    s-fold norm has valuation at least t_i.  Condition (b) at level i: the
    i-th diagonal block of the norm, twisted by z^{-t_i}, has unit
    determinant.
    """
    f_mat = data.frobenius.norm(data.period)
    n = f_mat.n
    sizes = data.block_sizes
    report = {"conditions": [], "passed": True}
    at = 0
    for i, (size, t) in enumerate(zip(sizes, data.slopes)):
        d_i = at + size
        ok_a = True
        for r in range(d_i):
            for cidx in range(n):
                e = f_mat.entry(r, cidx)
                v = e.valuation()
                if v is None:
                    if e.prec < t:
                        raise PrecisionLoss("norm entry undecidable for (a)")
                    continue
                if v < t:
                    ok_a = False
        block = [[f_mat.entry(r, cc) for cc in range(at, d_i)]
                 for r in range(at, d_i)]
        det = LaurentMatrix(f_mat.field, block).det()
        v = det.valuation()
        if v is None:
            if det.is_exact_zero():
                ok_b = False
            else:
                raise PrecisionLoss("block determinant undecidable for (b)")
        else:
            ok_b = (v == size * t)
        report["conditions"].append({"i": i + 1, "a": ok_a, "b": ok_b})
        report["passed"] = report["passed"] and ok_a and ok_b
        at = d_i
    return report["passed"], report


def csd_check_zink(a_mat: LaurentMatrix, p: ParabolicSpec, mu, s: int) -> bool:
    """Zink-style divisibility: z^{-mu} times the s-fold norm lies in the
    opposite parabolic with power-series entries."""
    from .errors import NotCentral
    if p.blocks is None:
        raise PreconditionError("block data required")
    datum = RootDatum.gl(a_mat.n)
    for alpha in p.phi_m:
        if _dot(alpha, mu) != 0:
            raise NotCentral("mu must be central in the Levi")
    if not datum.is_dominant(mu):
        raise PreconditionError("mu must be dominant")
    owner = p.block_of()
    f_mat = a_mat.norm(s)
    for i in range(a_mat.n):
        for j in range(a_mat.n):
            e = f_mat.entry(i, j)
            if owner[i] < owner[j]:
                if not e.is_zero_known():
                    return False
                continue
            v = e.valuation()
            if v is None:
                if e.prec < mu[i]:
                    raise PrecisionLoss("norm entry undecidable")
                continue
            if v < mu[i]:
                return False
    return True


# -- Remark-style inclusion exponents ----------------------------------------------


def inclusion_exponent(ctx: AffineWeyl, x: AffineWeylElement,
                       p: ParabolicSpec, d: int, cap: int = 256) -> int:
    """Least l >= 0 with x^l I_N x^{-l} and x^{-l} I_Nbar x^l inside I_d,
    decided on the minimal affine root over every finite root."""
    c = ctx._c
    for l in range(cap + 1):
        xl = x ** l
        xli = xl.inverse()
        good = True
        for a in sorted(p.phi_n):
            beta, lvl = ctx.conjugate_affine_root(xl, a, c(a))
            if lvl < d + c(beta):
                good = False
                break
        if good:
            for a in sorted(p.phi_nbar):
                beta, lvl = ctx.conjugate_affine_root(xli, a, c(a))
                if lvl < d + c(beta):
                    good = False
                    break
        if good:
            return l
    raise PreconditionError("no inclusion exponent below the cap")
