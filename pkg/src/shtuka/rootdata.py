"""Root-datum combinatorics: coweights, dominance, pi_1, chain lengths.

GL_n is the fully supported datum (type A_{n-1} in the standard
n-dimensional lattices, upper-triangular Borel).  Arbitrary split data can
be supplied through explicit simple root / coroot matrices; positive roots
are then generated by reflection closure.

Coweights are plain integer tuples, rational coweights tuples of
``Fraction``.  All arithmetic is exact; there is no floating point here.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .errors import PreconditionError

IntVec = tuple[int, ...]
Vec = tuple  # int or Fraction entries


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vec_scale(c, a):
    return tuple(c * x for x in a)


@dataclass(frozen=True)
class Pi1Class:
    """Class of a cocharacter modulo the coroot lattice.

    ``vector`` is the canonical coset representative obtained by reducing
    against an echelonized coroot basis.  For GL_n the class is determined
    by ``degree`` (the coordinate sum).
    """

    vector: IntVec

    @property
    def degree(self) -> int:
        return sum(self.vector)

    def __int__(self) -> int:
        return self.degree


def _solve_rational(columns, target):
    """Solve sum_j c_j * columns[j] = target over Q; None if inconsistent."""
    n = len(target)
    k = len(columns)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])]
           for i in range(n)]
    pivots = []
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, n) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    for r in range(row, n):
        if aug[r][k] != 0:
            return None
    coeffs = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        coeffs[col] = aug[r][k]
    return coeffs


def _hermite_rows(rows):
    """Row-style Hermite normal form of an integer matrix (as row list)."""
    mat = [list(r) for r in rows]
    n_cols = len(mat[0]) if mat else 0
    res = []
    col = 0
    while mat and col < n_cols:
        nz = [r for r in mat if r[col] != 0]
        if not nz:
            col += 1
            continue
        while True:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            done = True
            for r in nz[1:]:
                q = r[col] // piv[col]
                if q:
                    for i in range(n_cols):
                        r[i] -= q * piv[i]
                if r[col] != 0:
                    done = False
            nz = [piv] + [r for r in nz[1:] if r[col] != 0]
            if done or len(nz) == 1:
                break
        if piv[col] < 0:
            piv = [-x for x in piv]
        res.append(piv)
        mat = [r for r in mat if r is not piv and any(r)]
        for r in mat:
            if r[col] != 0:
                q = r[col] // piv[col]
                for i in range(n_cols):
                    r[i] -= q * piv[i]
        mat = [r for r in mat if any(r)]
        col += 1
    return res


class RootDatum:
    """A split root datum given by simple roots and coroots.

    The character and cocharacter lattices are both identified with Z^rank
    via dual bases, so every pairing is a plain dot product.
    """

    def __init__(self, rank: int, simple_roots, simple_coroots, name=""):
        if len(simple_roots) != len(simple_coroots):
            raise PreconditionError("mismatched simple root/coroot lists")
        self.rank = rank
        self.simple_roots = tuple(tuple(a) for a in simple_roots)
        self.simple_coroots = tuple(tuple(a) for a in simple_coroots)
        self.name = name or f"rank{rank}"
        self._check_cartan()
        self.positive_roots, self._coroot_of = self._generate_positive()
        self.rho = _vec_scale(Fraction(1, 2),
                              self._sum(self.positive_roots))
        self.two_rho = tuple(int(2 * r) for r in self.rho)
        for av in self.simple_coroots:
            if _dot(self.rho, av) != 1:
                raise PreconditionError("rho pairing check failed")
        self.fundamental_weights = self._fundamental_weights()
        self._coroot_hnf = _hermite_rows(self.simple_coroots)

    # -- construction ----------------------------------------------------

    _GL_CACHE: dict = {}

    @classmethod
    def gl(cls, n: int) -> "RootDatum":
        if n in cls._GL_CACHE:
            return cls._GL_CACHE[n]
        if n < 1:
            raise PreconditionError("gl(n) needs n >= 1")
        simple = []
        for i in range(n - 1):
            v = [0] * n
            v[i], v[i + 1] = 1, -1
            simple.append(tuple(v))
        d = cls(n, simple, simple, name=f"gl{n}")
        cls._GL_CACHE[n] = d
        return d

    @property
    def is_gl(self) -> bool:
        return self.name.startswith("gl")

    def _check_cartan(self):
        k = len(self.simple_roots)
        for i in range(k):
            for j in range(k):
                c = _dot(self.simple_roots[j], self.simple_coroots[i])
                if i == j and c != 2:
                    raise PreconditionError("Cartan diagonal must be 2")
                if i != j and c > 0:
                    raise PreconditionError("off-diagonal Cartan entry > 0")

    def _generate_positive(self):
        # Reflection closure of the simple (root, coroot) pairs.
        seen = {}
        frontier = list(zip(self.simple_roots, self.simple_coroots))
        for a, av in frontier:
            seen[a] = av
        guard = 0
        while frontier:
            guard += 1
            if guard > 10000:
                raise PreconditionError("root generation did not terminate")
            new = []
            for a, av in frontier:
                for b, bv in zip(self.simple_roots, self.simple_coroots):
                    c = _dot(a, bv)
                    ra = _vec_sub(a, _vec_scale(c, b))
                    rav = _vec_sub(av, _vec_scale(_dot(b, av), bv))
                    if ra not in seen and tuple(-x for x in ra) not in seen:
                        seen[ra] = rav
                        new.append((ra, rav))
                    elif ra in seen:
                        pass
            frontier = new
        # keep the representative with non-negative simple coordinates
        pos = []
        coroot_of = {}
        for a, av in seen.items():
            coeffs = _solve_rational(self.simple_roots, a)
            if coeffs is None:
                raise PreconditionError("root outside simple-root span")
            if all(c >= 0 for c in coeffs):
                pos.append(a)
                coroot_of[a] = av
            else:
                neg = tuple(-x for x in a)
                coroot_of[neg] = tuple(-x for x in av)
        pos.sort()
        # make sure negatives of positives are known too
        for a in pos:
            coroot_of.setdefault(tuple(-x for x in a),
                                 tuple(-x for x in coroot_of[a]))
        return tuple(pos), coroot_of

    def _sum(self, vecs):
        acc = tuple(Fraction(0) for _ in range(self.rank))
        for v in vecs:
            acc = _vec_add(acc, v)
        return acc

    def _fundamental_weights(self):
        # omega_i with <omega_i, alpha_j^vee> = delta_ij; any rational
        # solution works since it is only paired against coroot-span vectors.
        ws = []
        k = len(self.simple_coroots)
        for i in range(k):
            target = [Fraction(1) if j == i else Fraction(0) for j in range(k)]
            # solve coroot-matrix * w = e_i, unknowns w in Q^rank
            cols = [tuple(av[r] for av in self.simple_coroots)
                    for r in range(self.rank)]
            sol = _solve_rational(cols, target)
            if sol is None:
                raise PreconditionError("no fundamental weight solution")
            ws.append(tuple(sol))
        return tuple(ws)

    # -- basic pairings and orders ----------------------------------------

    def pair(self, chi, lam):
        """<chi, lam> for a character chi and cocharacter lam."""
        return _dot(chi, lam)

    def roots(self):
        """All roots, positive then negative."""
        return self.positive_roots + tuple(
            tuple(-x for x in a) for a in self.positive_roots)

    def coroot(self, alpha):
        return self._coroot_of[tuple(alpha)]

    def is_dominant(self, mu) -> bool:
        return all(_dot(a, mu) >= 0 for a in self.simple_roots)

    def dominance_leq(self, mu1, mu2) -> bool:
        """mu1 <= mu2 iff mu2 - mu1 is a non-negative combination of simple
        coroots (integral when both arguments are integral)."""
        if len(mu1) != self.rank or len(mu2) != self.rank:
            raise PreconditionError("dimension mismatch")
        diff = _vec_sub(mu2, mu1)
        coeffs = _solve_rational(self.simple_coroots, diff)
        if coeffs is None:
            return False
        integral = all(isinstance(x, int) for x in mu1 + mu2)
        for c in coeffs:
            if c < 0:
                return False
            if integral and c.denominator != 1:
                return False
        return True

    def dominant_representative(self, mu):
        """The unique dominant element in the finite Weyl orbit of mu."""
        v = tuple(mu)
        while True:
            for a in self.simple_roots:
                c = _dot(a, v)
                if c < 0:
                    v = _vec_sub(v, _vec_scale(c, self.coroot(a)))
                    break
            else:
                return v

    def kottwitz_class(self, mu) -> Pi1Class:
        """Image of an integral coweight in X_*(T)/(coroot lattice)."""
        v = [int(x) for x in mu]
        for row in self._coroot_hnf:
            col = next(i for i, x in enumerate(row) if x != 0)
            q = v[col] // row[col]
            if q:
                for i in range(self.rank):
                    v[i] -= q * row[i]
        return Pi1Class(tuple(v))

    # -- Newton chain lengths ---------------------------------------------

    def newton_chain_length(self, mu, nu) -> int:
        """Maximal chain length between comparable Newton points:
        sum over fundamental weights of ceil(<omega_i, mu - nu>)."""
        mu = tuple(Fraction(x) for x in mu)
        nu = tuple(Fraction(x) for x in nu)
        if not self.dominance_leq(nu, mu):
            raise PreconditionError("nu must be dominance-below mu")
        diff = _vec_sub(mu, nu)
        return sum(ceil(_dot(w, diff)) for w in self.fundamental_weights)


def parse_coweight(text: str):
    """Parse ``[1,0,1]`` or ``[1/2,1/2]`` to an int or Fraction tuple."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    parts = [p.strip() for p in body.split(",") if p.strip()]
    vals = [Fraction(p) for p in parts]
    if all(v.denominator == 1 for v in vals):
        return tuple(int(v) for v in vals)
    return tuple(vals)


def format_coweight(mu) -> str:
    return "[" + ",".join(str(x) for x in mu) + "]"
