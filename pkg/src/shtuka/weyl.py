"""Extended affine Weyl group arithmetic.

An element is stored in the normal form ``x = z^translation * w`` where
``w`` is a finite Weyl element acting on the cocharacter lattice (an
integer matrix; a permutation matrix for GL_n).  The matrix realization of
``x`` is ``diag(z^t) * M_w`` with ``M_w e_j = e_{w(j)}``.

Two actions on affine roots ``(alpha, k)`` are exposed:

* ``conjugate_affine_root`` -- the level shift produced by matrix
  conjugation ``x U_{(alpha,k)} x^{-1}``; this is the action used for
  length, Iwahori stability and everything that must agree with the
  matrix layer.
* ``act_on_affine_root`` -- the pullback action on affine functionals,
  ``(alpha,k) |-> (w alpha, k - <t, w alpha>)``.

Lengths are computed by inversion counting against the Iwahori positivity
convention: ``(alpha, k)`` positive iff ``k > 0`` or (``k = 0`` and
``alpha > 0``).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError
from .rootdata import RootDatum, _dot, _vec_add, _vec_sub

IntVec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]


def identity_matrix(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n))


def mat_vec(a: Mat, v):
    return tuple(_dot(row, v) for row in a)


def mat_inv(a: Mat) -> Mat:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] +
           [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = aug[i][n + j]
            if v.denominator != 1:
                raise PreconditionError("matrix is not invertible over Z")
            row.append(int(v))
        out.append(tuple(row))
    return tuple(out)


def perm_matrix(perm: IntVec) -> Mat:
    """Matrix with M e_j = e_{perm[j]} (0-indexed one-line images)."""
    n = len(perm)
    return tuple(tuple(1 if perm[j] == i else 0 for j in range(n))
                 for i in range(n))


def matrix_perm(m: Mat) -> IntVec:
    """Inverse of perm_matrix; raises if m is not a permutation matrix."""
    n = len(m)
    perm = [None] * n
    for j in range(n):
        col = [m[i][j] for i in range(n)]
        if sorted(col) != [0] * (n - 1) + [1]:
            raise PreconditionError("not a permutation matrix")
        perm[j] = col.index(1)
    return tuple(perm)


def cycles_of_perm(perm: IntVec):
    """Nontrivial cycles, 0-indexed, each starting at its least element."""
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            seen.add(i)
            continue
        cyc = [i]
        j = perm[i]
        seen.add(i)
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class AffineWeylElement:
    """z^translation * w with w given by its cocharacter-lattice matrix."""

    translation: IntVec
    w: Mat

    @property
    def rank(self) -> int:
        return len(self.translation)

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        t = _vec_add(self.translation, mat_vec(self.w, other.translation))
        return AffineWeylElement(t, mat_mul(self.w, other.w))

    def inverse(self) -> "AffineWeylElement":
        wi = mat_inv(self.w)
        t = tuple(-x for x in mat_vec(wi, self.translation))
        return AffineWeylElement(t, wi)

    def __pow__(self, k: int) -> "AffineWeylElement":
        if k < 0:
            return self.inverse() ** (-k)
        acc = AffineWeylElement(tuple(0 for _ in self.translation),
                                identity_matrix(self.rank))
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def is_identity(self) -> bool:
        return (all(x == 0 for x in self.translation)
                and self.w == identity_matrix(self.rank))

    def is_translation(self) -> bool:
        return self.w == identity_matrix(self.rank)

    def perm(self) -> IntVec:
        return matrix_perm(self.w)


@lru_cache(maxsize=4096)
def _char_matrix(w: Mat) -> Mat:
    """(w^{-1})^T, the matrix of the character action of w."""
    wi = mat_inv(w)
    n = len(wi)
    return tuple(tuple(wi[j][i] for j in range(n)) for i in range(n))


def translation(t) -> AffineWeylElement:
    t = tuple(int(x) for x in t)
    return AffineWeylElement(t, identity_matrix(len(t)))


def from_perm_times_translation(perm: IntVec, t) -> AffineWeylElement:
    """The product  M_perm * z^t  in normal form (t-vector seen on the right,
    the order used in element literals)."""
    m = perm_matrix(perm)
    return AffineWeylElement(mat_vec(m, tuple(int(x) for x in t)), m)


class AffineWeyl:
    """Operation context for the extended affine Weyl group of a datum."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.rank = datum.rank
        self._all_roots = datum.roots()
        self._simple_affine = None

    # -- basics ------------------------------------------------------------

    def one(self) -> AffineWeylElement:
        return AffineWeylElement(tuple(0 for _ in range(self.rank)),
                                 identity_matrix(self.rank))

    def root_action(self, x: AffineWeylElement, alpha):
        """w alpha, the character image under the finite part of x."""
        return mat_vec(_char_matrix(x.w), alpha)

    @staticmethod
    def _c(alpha) -> int:
        """Minimal Iwahori level of a finite root: 0 if positive else 1."""
        for x in alpha:
            if x > 0:
                return 0
            if x < 0:
                return 1
        raise PreconditionError("zero is not a root")

    def is_positive_affine(self, alpha, k: int) -> bool:
        return k >= self._c(alpha)

    def conjugate_affine_root(self, x: AffineWeylElement, alpha, k: int):
        """Image of the affine root subgroup U_{(alpha,k)} under g -> x g x^{-1}."""
        wa = self.root_action(x, alpha)
        return wa, k + _dot(x.translation, wa)

    def act_on_affine_root(self, x: AffineWeylElement, alpha, k: int):
        """Pullback action on affine functionals."""
        wa = self.root_action(x, alpha)
        return wa, k - _dot(x.translation, wa)

    # -- length and words ----------------------------------------------------

    def length(self, x: AffineWeylElement) -> int:
        total = 0
        for a in self._all_roots:
            wa, _ = self.conjugate_affine_root(x, a, 0)
            shift = _dot(x.translation, wa)
            total += max(0, self._c(wa) - shift - self._c(a))
        return total

    def length_in_levi(self, x: AffineWeylElement, levi_roots) -> int:
        """Inversion count restricted to the roots of a Levi subsystem."""
        total = 0
        for a in levi_roots:
            wa, _ = self.conjugate_affine_root(x, a, 0)
            shift = _dot(x.translation, wa)
            total += max(0, self._c(wa) - shift - self._c(a))
        return total

    def simple_affine_reflections(self):
        """s_1..s_{rank of datum} finite, then s_0 at the highest root."""
        if self._simple_affine is None:
            refl = []
            for a, av in zip(self.datum.simple_roots,
                             self.datum.simple_coroots):
                refl.append(self._finite_reflection(a, av))
            theta, theta_v = self._highest_root()
            s_theta = self._finite_reflection(theta, theta_v)
            s0 = AffineWeylElement(tuple(-x for x in theta_v), s_theta.w)
            self._simple_affine = tuple(refl) + (s0,)
        return self._simple_affine

    def _finite_reflection(self, alpha, alpha_v) -> AffineWeylElement:
        n = self.rank
        cols = []
        for j in range(n):
            e = tuple(1 if i == j else 0 for i in range(n))
            cols.append(_vec_sub(e, tuple(alpha[j] * x for x in alpha_v)))
        mat = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
        return AffineWeylElement(tuple(0 for _ in range(n)), mat)

    def _highest_root(self):
        a = self.datum.positive_roots[0]
        climbed = True
        while climbed:
            climbed = False
            for b in self.datum.simple_roots:
                cand = _vec_add(a, b)
                if cand in self.datum.positive_roots:
                    a = cand
                    climbed = True
                    break
        return a, self.datum.coroot(a)

    def reduced_word(self, x: AffineWeylElement):
        """(indices, omega_part) with x = s_{i1} ... s_{ik} * omega_part."""
        word = []
        cur = x
        cur_len = self.length(cur)
        gens = self.simple_affine_reflections()
        while cur_len > 0:
            for i, s in enumerate(gens):
                cand = s * cur
                cl = self.length(cand)
                if cl < cur_len:
                    word.append(i)
                    cur, cur_len = cand, cl
                    break
            else:
                raise PreconditionError("no descent found below length 0")
        return word, cur

    def is_omega(self, x: AffineWeylElement) -> bool:
        return self.length(x) == 0

    def bruhat_leq(self, y: AffineWeylElement, x: AffineWeylElement) -> bool:
        """Subword test against one fixed reduced word of x."""
        word_x, tau_x = self.reduced_word(x)
        word_y, tau_y = self.reduced_word(y)
        if tau_x != tau_y:
            return False
        gens = self.simple_affine_reflections()
        target = y * tau_y.inverse()
        reachable = {self.one(): 0}
        for i in word_x:
            s = gens[i]
            extra = {}
            for r, lr in reachable.items():
                cand = r * s
                if cand not in reachable and self.length(cand) == lr + 1:
                    extra[cand] = lr + 1
            reachable.update(extra)
        return target in reachable

    # -- Newton points ---------------------------------------------------------

    def finite_order(self, x: AffineWeylElement) -> int:
        m = x.w
        ident = identity_matrix(self.rank)
        k = 1
        cur = m
        while cur != ident:
            cur = mat_mul(cur, m)
            k += 1
            if k > 10000:
                raise PreconditionError("finite part has unreasonable order")
        return k

    def newton_vector(self, x: AffineWeylElement):
        """The rational coweight (1/t) * translation(x^t), not dominantized."""
        t = self.finite_order(x)
        xt = x ** t
        return tuple(Fraction(v, t) for v in xt.translation)

    def newton_point(self, x: AffineWeylElement):
        """Dominant representative of the Newton vector."""
        return self.datum.dominant_representative(self.newton_vector(x))

    def kottwitz(self, x: AffineWeylElement) -> int:
        return sum(x.translation)
