"""Fundamental alcoves: predicate, standard representatives, and search.

A fundamental alcove for a parabolic P = MN is an element x of the
extended affine Weyl group of M whose conjugation action aligns the
Iwahori affine-root sets: it permutes the I_M roots, pushes I_N into
itself and pulls I_Nbar into itself.  Because the action is affine, each
containment is decided on the minimal affine root over every finite root.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .errors import IncompatibleInvariants, PreconditionError
from .loopgln import ParabolicSpec, SigmaInvariants
from .rootdata import RootDatum, _dot
from .weyl import (AffineWeyl, AffineWeylElement, from_perm_times_translation,
                   perm_matrix)


@dataclass
class FundamentalAlcoveCertificate:
    x: AffineWeylElement
    parabolic: ParabolicSpec
    conjugator: tuple | None          # minimal coset representative, one-line
    witnesses: dict = field(default_factory=dict)

    def as_dict(self, ctx: AffineWeyl):
        from .literals import format_cycles, format_weyl
        nu = ctx.newton_point(self.x)
        return {
            "x": format_weyl(self.x),
            "levi_blocks": [list(b) for b in self.parabolic.blocks]
            if self.parabolic.blocks else None,
            "conjugator": format_cycles(self.conjugator)
            if self.conjugator is not None else None,
            "newton": [str(c) for c in nu],
            "kappa": ctx.kottwitz(self.x),
            "length": ctx.length(self.x),
            "witnesses": self.witnesses,
        }


def is_p_fundamental(ctx: AffineWeyl, x: AffineWeylElement, p: ParabolicSpec,
                     with_certificate: bool = False):
    """Decide the alignment conditions of a fundamental P-alcove.

    Returns a bool, or (bool, witnesses) with the image of the minimal
    affine root over every finite root of the partition.
    """
    datum = ctx.datum
    witnesses = {"in_levi_weyl": None, "levi": [], "n_side": [], "nbar_side": []}
    ok = _finite_part_in_levi(ctx, x, p)
    witnesses["in_levi_weyl"] = ok
    c = ctx._c
    if ok:
        for a in sorted(p.phi_m):
            wa, lvl = ctx.conjugate_affine_root(x, a, c(a))
            hit = tuple(wa) in p.phi_m and lvl == c(wa)
            witnesses["levi"].append((a, c(a), wa, lvl, hit))
            ok = ok and hit
    if ok:
        for a in sorted(p.phi_n):
            wa, lvl = ctx.conjugate_affine_root(x, a, c(a))
            hit = tuple(wa) in p.phi_n and lvl >= c(wa)
            witnesses["n_side"].append((a, c(a), wa, lvl, hit))
            ok = ok and hit
    if ok:
        xi = x.inverse()
        for a in sorted(p.phi_nbar):
            wa, lvl = ctx.conjugate_affine_root(xi, a, c(a))
            hit = tuple(wa) in p.phi_nbar and lvl >= c(wa)
            witnesses["nbar_side"].append((a, c(a), wa, lvl, hit))
            ok = ok and hit
    if with_certificate:
        return ok, witnesses
    return ok


def _finite_part_in_levi(ctx: AffineWeyl, x: AffineWeylElement,
                         p: ParabolicSpec) -> bool:
    """w lies in the Levi Weyl group iff it fixes a strictly M-central
    test vector."""
    datum = ctx.datum
    probe = _central_probe(datum, p)
    from .weyl import mat_vec
    return mat_vec(x.w, probe) == probe


def _central_probe(datum: RootDatum, p: ParabolicSpec):
    """A rational vector with <alpha, v> = 0 exactly for alpha in Phi_M."""
    if p.blocks is not None:
        owner = p.block_of()
        return tuple(Fraction(owner[i] + 1) for i in range(p.rank))
    basis = _nullspace([list(a) for a in sorted(p.phi_m)], datum.rank)
    if not basis:
        raise PreconditionError("Levi has no central directions")
    off = [a for a in datum.roots() if tuple(a) not in p.phi_m]
    for t in range(1, 10000):
        v = tuple(sum(Fraction(t) ** k * b[i] for k, b in enumerate(basis))
                  for i in range(datum.rank))
        if all(_dot(a, v) != 0 for a in off):
            return v
    raise PreconditionError("no central probe found")


def _nullspace(rows, n):
    """Basis of the rational nullspace of the given row functionals."""
    aug = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row_i, pc in enumerate(pivots):
            v[pc] = -aug[row_i][fc]
        basis.append(v)
    return basis


# -- centralizer parabolics -------------------------------------------------------


def centralizer_levi(datum: RootDatum, nu) -> ParabolicSpec:
    """Standard parabolic whose Levi centralizes the dominant point nu."""
    if not datum.is_dominant(nu):
        raise PreconditionError("nu must be dominant")
    return centralizer_parabolic_of_vector(datum, nu)


def centralizer_parabolic_of_vector(datum: RootDatum, nu_vec) -> ParabolicSpec:
    """Partition by the sign of <alpha, nu>; for GL_n this is the block
    structure grouping equal entries, blocks ordered by decreasing value."""
    if datum.is_gl:
        n = datum.rank
        values = sorted(set(nu_vec), reverse=True)
        blocks = [tuple(i for i in range(n) if nu_vec[i] == v) for v in values]
        return ParabolicSpec.from_blocks(n, blocks)
    phi_m = {tuple(a) for a in datum.roots() if _dot(a, nu_vec) == 0}
    phi_n = {tuple(a) for a in datum.roots() if _dot(a, nu_vec) > 0}
    return ParabolicSpec.from_root_sets(datum.rank, phi_m, phi_n)


# -- standard representatives -----------------------------------------------------


def _validate_invariants(datum: RootDatum, inv: SigmaInvariants):
    n = datum.rank
    nu = tuple(Fraction(x) for x in inv.newton)
    if len(nu) != n:
        raise IncompatibleInvariants("Newton point has wrong rank")
    if not datum.is_dominant(nu):
        raise IncompatibleInvariants("Newton point must be dominant")
    if sum(nu) != inv.kappa:
        raise IncompatibleInvariants("kappa must equal the slope sum")
    # group equal slopes and demand integral block sums
    blocks = []
    at = 0
    while at < n:
        end = at
        while end < n and nu[end] == nu[at]:
            end += 1
        if (nu[at] * (end - at)).denominator != 1:
            raise IncompatibleInvariants(
                "slope multiplicity incompatible with its denominator")
        blocks.append((at, end, nu[at]))
        at = end
    return nu, blocks


def _cyclic_block(start: int, size: int, n: int, power: int) -> AffineWeylElement:
    """The length-zero rotation on indices [start, start+size) with kappa =
    power, as an element of the full group (identity elsewhere)."""
    perm = list(range(n))
    for off in range(size):
        src = start + off
        dst = start + (off - 1) % size
        perm[src] = dst
    t = [0] * n
    t[start] = 1
    base = from_perm_times_translation(tuple(perm), t)
    return base ** power


def standard_representative(datum: RootDatum,
                            inv: SigmaInvariants) -> AffineWeylElement:
    """The unique element of the class that has length zero in the
    centralizer Levi and Levi-dominant Newton point equal to nu.

    The construction is per isoclinic block: a cyclic rotation with a
    z-twist on the wrap-around, raised to the block degree.  Uniqueness is
    enforced by checking the defining conditions afterwards.
    """
    if not datum.is_gl:
        raise PreconditionError("standard representatives are GL_n only")
    n = datum.rank
    nu, blocks = _validate_invariants(datum, inv)
    ctx = AffineWeyl(datum)
    x = ctx.one()
    for (at, end, slope) in blocks:
        size = end - at
        power = int(slope * size)
        x = x * _cyclic_block(at, size, n, power)
    verify_standard_representative(ctx, x, inv)
    return x


def verify_standard_representative(ctx: AffineWeyl, x: AffineWeylElement,
                                   inv: SigmaInvariants) -> bool:
    """Check the two defining conditions; raises when they fail."""
    datum = ctx.datum
    nu = tuple(Fraction(v) for v in inv.newton)
    p = centralizer_levi(datum, nu)
    if not _finite_part_in_levi(ctx, x, p):
        raise IncompatibleInvariants("candidate leaves the Levi Weyl group")
    if ctx.length_in_levi(x, sorted(p.phi_m)) != 0:
        raise IncompatibleInvariants("candidate has positive Levi length")
    if ctx.newton_vector(x) != nu:
        raise IncompatibleInvariants("candidate has wrong Newton point")
    if ctx.kottwitz(x) != inv.kappa:
        raise IncompatibleInvariants("candidate has wrong kappa")
    return True


# -- search --------------------------------------------------------------------------


def minimal_coset_representatives(blocks, n):
    """Minimal-length representatives of W_M \\ W: permutations whose
    inverse is increasing on every block."""
    owner = {}
    for b in blocks:
        for i in b:
            owner[i] = b
    out = []
    for perm in permutations(range(n)):
        inv = [0] * n
        for j, i in enumerate(perm):
            inv[i] = j
        good = True
        for b in blocks:
            vals = [inv[i] for i in b]
            if vals != sorted(vals):
                good = False
                break
        if good:
            out.append(tuple(perm))
    return out


def _rotation_element(n: int) -> AffineWeylElement:
    """The length-zero cyclic rotation generating the alcove symmetries."""
    return _cyclic_block(0, n, n, 1)


def _perm_length(perm) -> int:
    n = len(perm)
    return sum(1 for i in range(n) for j in range(i + 1, n)
               if perm[i] > perm[j])


def find_fundamental_alcoves(datum: RootDatum, inv: SigmaInvariants,
                             up_to_symmetry: bool = True):
    """The fundamental alcoves in the class with the given invariants.

    Scans the minimal-length coset representatives w of the centralizer
    Levi, testing w^{-1} x_b w against the centralizer parabolic of its own
    Newton vector (this includes the allowed Levi enlargement).

    Conjugation by a length-zero rotation normalizes the Iwahori subgroup,
    commutes with the Frobenius twist and therefore maps fundamental
    alcoves of the class to fundamental alcoves of the same class; by
    default one certificate per such symmetry orbit is returned, the one
    with the shortest (then lexicographically least) conjugator.
    """
    if not datum.is_gl:
        raise PreconditionError("alcove search is GL_n only")
    ctx = AffineWeyl(datum)
    x_b = standard_representative(datum, inv)
    p_std = centralizer_levi(datum, tuple(Fraction(v) for v in inv.newton))
    raw = []
    seen = set()
    for wperm in minimal_coset_representatives(p_std.blocks, datum.rank):
        w = AffineWeylElement(tuple(0 for _ in range(datum.rank)),
                              perm_matrix(wperm))
        cand = w.inverse() * x_b * w
        if cand in seen:
            continue
        p_cand = centralizer_parabolic_of_vector(datum, ctx.newton_vector(cand))
        ok, wit = is_p_fundamental(ctx, cand, p_cand, with_certificate=True)
        if ok:
            seen.add(cand)
            raw.append(FundamentalAlcoveCertificate(
                cand, p_cand, wperm,
                {"levi": [w[:5] for w in wit["levi"]],
                 "n_side": [w[:5] for w in wit["n_side"]],
                 "nbar_side": [w[:5] for w in wit["nbar_side"]]}))
    if not raw:
        raise PreconditionError("no fundamental alcove found; invalid class")
    if not up_to_symmetry:
        return raw
    raw.sort(key=lambda c: (_perm_length(c.conjugator), c.conjugator))
    rho = _rotation_element(datum.rank)
    out = []
    claimed = set()
    for cert in raw:
        if cert.x in claimed:
            continue
        out.append(cert)
        orbit = cert.x
        for _ in range(datum.rank):
            orbit = rho.inverse() * orbit * rho
            claimed.add(orbit)
    return out
