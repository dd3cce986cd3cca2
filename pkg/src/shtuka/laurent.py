"""Exact truncated arithmetic in F_{q^m}((z)) and matrices over it.

Field elements are small integers encoding polynomials over F_p in base p.
Multiplication goes through discrete log/exp tables, which keeps every
element operation O(1); that requires q^m <= 2^16.

A series knows its coefficients for all exponents k < prec exactly.  Every
operation propagates the output precision pessimistically; an operation
that would need an unknown digit raises PrecisionLoss instead of guessing.
Exact values (structure constants, monomial matrices) carry prec = INF.
"""

from .errors import PrecisionLoss, PreconditionError, Singular

INF = float("inf")

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    i = 49
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def _factor(n: int):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# polynomial helpers on base-p integer encodings (digit i = coeff of t^i)

def _poly_digits(a: int, p: int):
    out = []
    while a:
        out.append(a % p)
        a //= p
    return out


def _poly_from_digits(digits, p: int) -> int:
    out = 0
    for c in reversed(digits):
        out = out * p + c
    return out


def _poly_add(a: int, b: int, p: int) -> int:
    if p == 2:
        return a ^ b
    da, db = _poly_digits(a, p), _poly_digits(b, p)
    if len(da) < len(db):
        da, db = db, da
    for i, c in enumerate(db):
        da[i] = (da[i] + c) % p
    return _poly_from_digits(da, p)


def _poly_mulmod(a: int, b: int, mod: int, p: int, deg: int) -> int:
    # schoolbook multiply then reduce by the monic modulus of degree deg
    da, db = _poly_digits(a, p), _poly_digits(b, p)
    prod = [0] * (len(da) + len(db))
    for i, ca in enumerate(da):
        if ca:
            for j, cb in enumerate(db):
                prod[i + j] = (prod[i + j] + ca * cb) % p
    dm = _poly_digits(mod, p)
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(deg):
                prod[i - deg + j] = (prod[i - deg + j] - c * dm[j]) % p
    return _poly_from_digits(prod[:deg], p)


def _poly_powmod(a: int, k: int, mod: int, p: int, deg: int) -> int:
    acc = 1
    base = a
    while k:
        if k & 1:
            acc = _poly_mulmod(acc, base, mod, p, deg)
        base = _poly_mulmod(base, base, mod, p, deg)
        k >>= 1
    return acc


def _is_irreducible(mod: int, p: int, deg: int) -> bool:
    if deg == 1:
        return True
    # Rabin: x^{p^deg} == x  and  gcd-free at proper prime divisors
    x = p  # the polynomial t
    xq = _poly_powmod(x, p ** deg, mod, p, deg)
    if xq != x:
        return False
    for ell in _factor(deg):
        d = deg // ell
        y = _poly_powmod(x, p ** d, mod, p, deg)
        diff = _poly_add(y, _poly_neg(x, p), p)
        if _poly_gcd(diff, mod, p) != 1:
            return False
    return True


def _poly_neg(a: int, p: int) -> int:
    if p == 2:
        return a
    return _poly_from_digits([(-c) % p for c in _poly_digits(a, p)], p)


def _poly_gcd(a: int, b: int, p: int) -> int:
    while b:
        a, b = b, _poly_rem(a, b, p)
    # normalize to monic
    da = _poly_digits(a, p)
    if not da:
        return 0
    lead = da[-1]
    inv = pow(lead, p - 2, p)
    return _poly_from_digits([(c * inv) % p for c in da], p)


def _poly_rem(a: int, b: int, p: int) -> int:
    da, db = _poly_digits(a, p), _poly_digits(b, p)
    if not db:
        raise ZeroDivisionError
    inv = pow(db[-1], p - 2, p)
    while len(da) >= len(db):
        c = (da[-1] * inv) % p
        if c:
            off = len(da) - len(db)
            for j, cb in enumerate(db):
                da[off + j] = (da[off + j] - c * cb) % p
        da.pop()
        while da and da[-1] == 0:
            da.pop()
        if not da:
            break
    return _poly_from_digits(da, p)


def find_irreducible(p: int, deg: int) -> int:
    """Lexicographically least monic irreducible of given degree over F_p."""
    if deg == 1:
        return p  # the polynomial t
    lead = p ** deg
    for tail in range(lead):
        mod = lead + tail
        if _is_irreducible(mod, p, deg):
            return mod
    raise PreconditionError("no irreducible polynomial found")


class FiniteField:
    """F_{q^m} with q = p^e, elements encoded as ints in [0, q^m).

    sigma is x -> x^q, the relative Frobenius fixing exactly F_q; it has
    order m.  All hot operations are table lookups.
    """

    def __init__(self, p: int, e: int = 1, m: int = 1, modulus: int | None = None):
        if not _is_prime(p):
            raise PreconditionError(f"{p} is not prime")
        if e < 1 or m < 1:
            raise PreconditionError("need e >= 1 and m >= 1")
        self.p, self.e, self.m = p, e, m
        self.q = p ** e
        self.degree = e * m
        self.size = p ** self.degree
        if self.size > 1 << 16:
            raise PreconditionError("field size above 2^16 is unsupported")
        self.modulus = modulus if modulus is not None else find_irreducible(p, self.degree)
        dm = _poly_digits(self.modulus, p)
        if len(dm) != self.degree + 1 or dm[-1] != 1:
            raise PreconditionError("modulus must be monic of degree e*m")
        if not _is_irreducible(self.modulus, p, self.degree):
            raise PreconditionError("modulus is reducible")
        self._build_tables()

    def _build_tables(self):
        p, deg, mod, size = self.p, self.degree, self.modulus, self.size
        order = size - 1
        fac = _factor(order)
        gen = None
        for cand in range(2, size):
            if all(_poly_powmod(cand, order // ell, mod, p, deg) != 1
                   for ell in fac):
                gen = cand
                break
        if gen is None:
            gen = 1  # size == 2
        exp = [1] * order
        log = [0] * size
        cur = 1
        for i in range(order):
            exp[i] = cur
            log[cur] = i
            cur = _poly_mulmod(cur, gen, mod, p, deg)
        self._exp, self._log, self._order = exp, log, order
        q = self.q
        self._frob = [0] * size
        for a in range(1, size):
            self._frob[a] = exp[(log[a] * q) % order]
        self._frob_inv = [0] * size
        for a in range(size):
            self._frob_inv[self._frob[a]] = a
        if p == 2:
            self._add_table = None
        elif size <= 512:
            self._add_table = [[_poly_add(a, b, p) for b in range(size)]
                               for a in range(size)]
        else:
            self._add_table = None

    # element ops ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return _poly_add(a, b, self.p)

    def neg(self, a: int) -> int:
        return _poly_neg(a, self.p) if self.p != 2 else a

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % self._order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % self._order]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError
            return 0
        return self._exp[(self._log[a] * k) % self._order]

    def sigma(self, a: int) -> int:
        return self._frob[a]

    def sigma_inv(self, a: int) -> int:
        return self._frob_inv[a]

    def sigma_pow(self, a: int, j: int) -> int:
        j %= self.m
        for _ in range(j):
            a = self._frob[a]
        return a

    def embed_int(self, c: int) -> int:
        return c % self.p

    def random(self, rng) -> int:
        return rng.randrange(self.size)

    def random_nonzero(self, rng) -> int:
        return rng.randrange(1, self.size)

    def elements(self):
        return range(self.size)

    # formatting ----------------------------------------------------------

    def format_elt(self, a: int) -> str:
        if self.degree == 1:
            return str(a)
        digits = _poly_digits(a, self.p)
        if not digits:
            return "0"
        terms = []
        for i in range(len(digits) - 1, -1, -1):
            c = digits[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                t = "t" if i == 1 else f"t^{i}"
                terms.append(t if c == 1 else f"{c}*{t}")
        return "+".join(terms)

    def spec_string(self) -> str:
        mod = self.format_modulus()
        return f"p={self.p},e={self.e},m={self.m},mod={mod}"

    def format_modulus(self) -> str:
        digits = _poly_digits(self.modulus, self.p)
        terms = []
        for i in range(len(digits) - 1, -1, -1):
            c = digits[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                t = "t" if i == 1 else f"t^{i}"
                terms.append(t if c == 1 else f"{c}*{t}")
        return "+".join(terms) if terms else "0"

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and (self.p, self.e, self.m, self.modulus)
                == (other.p, other.e, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.m, self.modulus))

    def __repr__(self):
        return f"FiniteField({self.spec_string()})"


class Series:
    """Truncated Laurent series: coefficients known exactly below prec."""

    __slots__ = ("field", "coeffs", "prec")

    def __init__(self, field: FiniteField, coeffs: dict, prec):
        self.field = field
        self.prec = prec
        self.coeffs = {k: c for k, c in coeffs.items() if c and k < prec}

    # constructors ----------------------------------------------------------

    @staticmethod
    def zero(field, prec=INF) -> "Series":
        return Series(field, {}, prec)

    @staticmethod
    def const(field, c: int, prec=INF) -> "Series":
        return Series(field, {0: c}, prec)

    @staticmethod
    def one(field, prec=INF) -> "Series":
        return Series.const(field, 1, prec)

    @staticmethod
    def z_power(field, k: int, prec=INF) -> "Series":
        return Series(field, {k: 1}, prec)

    @staticmethod
    def monomial(field, c: int, k: int, prec=INF) -> "Series":
        return Series(field, {k: c}, prec)

    # inspection ------------------------------------------------------------

    def valuation(self):
        """Least exponent with a nonzero known coefficient; None when all
        known coefficients vanish (then the value is 'at least prec')."""
        return min(self.coeffs) if self.coeffs else None

    def valuation_floor(self):
        v = self.valuation()
        return self.prec if v is None else v

    def is_zero_known(self) -> bool:
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return not self.coeffs and self.prec == INF

    def coeff(self, k: int) -> int:
        if k >= self.prec:
            raise PrecisionLoss(f"coefficient of z^{k} beyond precision {self.prec}")
        return self.coeffs.get(k, 0)

    def __eq__(self, other):
        return (isinstance(other, Series) and self.field == other.field
                and self.prec == other.prec and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.prec, tuple(sorted(self.coeffs.items()))))

    def agrees_with(self, other: "Series") -> bool:
        """Equality of all coefficients on the common known window."""
        cut = min(self.prec, other.prec)
        for k, c in self.coeffs.items():
            if k < cut and other.coeffs.get(k, 0) != c:
                return False
        for k, c in other.coeffs.items():
            if k < cut and self.coeffs.get(k, 0) != c:
                return False
        return True

    # arithmetic --------------------------------------------------------------

    def __add__(self, other: "Series") -> "Series":
        f = self.field
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        add = f.add
        for k, c in other.coeffs.items():
            r = add(out.get(k, 0), c)
            if r:
                out[k] = r
            elif k in out:
                del out[k]
        return Series(f, out, prec)

    def __neg__(self) -> "Series":
        f = self.field
        return Series(f, {k: f.neg(c) for k, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other: "Series") -> "Series":
        return self + (-other)

    def __mul__(self, other: "Series") -> "Series":
        f = self.field
        prec = min(self.prec + other.valuation_floor(),
                   other.prec + self.valuation_floor())
        out: dict[int, int] = {}
        mul, add = f.mul, f.add
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                if k < prec:
                    r = add(out.get(k, 0), mul(c1, c2))
                    if r:
                        out[k] = r
                    elif k in out:
                        del out[k]
        return Series(f, out, prec)

    def scale(self, c: int) -> "Series":
        f = self.field
        if c == 0:
            return Series(f, {}, self.prec)
        return Series(f, {k: f.mul(c, x) for k, x in self.coeffs.items()}, self.prec)

    def shift(self, k: int) -> "Series":
        return Series(self.field, {e + k: c for e, c in self.coeffs.items()},
                      self.prec + k)

    def truncate(self, prec) -> "Series":
        return Series(self.field, self.coeffs, min(self.prec, prec))

    def inverse(self) -> "Series":
        """Multiplicative inverse; output precision is prec - 2*valuation."""
        v = self.valuation()
        if v is None:
            if self.prec == INF:
                raise Singular("inverse of exact zero")
            raise PrecisionLoss("cannot invert a series with no known nonzero term")
        f = self.field
        lead = self.coeffs[v]
        lead_inv = f.inv(lead)
        if self.prec == INF:
            if len(self.coeffs) != 1:
                raise PrecisionLoss(
                    "inverse of an exact non-monomial series is an infinite "
                    "object; truncate to a finite precision first")
            rel = 1
            out_prec = INF
        else:
            rel = int(self.prec - v)
            out_prec = self.prec - 2 * v
        # invert u = 1 + higher, where self = lead * z^v * u
        u = {k - v: f.mul(lead_inv, c) for k, c in self.coeffs.items()}
        inv = {0: 1}
        for k in range(1, rel):
            acc = 0
            for j in range(1, k + 1):
                cj = u.get(j, 0)
                if cj:
                    acc = f.add(acc, f.mul(cj, inv.get(k - j, 0)))
            if acc:
                inv[k] = f.neg(acc)
        out = {k - v: f.mul(lead_inv, c) for k, c in inv.items()}
        return Series(f, out, out_prec)

    def sigma(self) -> "Series":
        f = self.field
        frob = f._frob
        return Series(f, {k: frob[c] for k, c in self.coeffs.items()}, self.prec)

    def sigma_inv(self) -> "Series":
        f = self.field
        tab = f._frob_inv
        return Series(f, {k: tab[c] for k, c in self.coeffs.items()}, self.prec)

    def __repr__(self):
        from .literals import format_series
        tail = "" if self.prec == INF else f" + O(z^{self.prec})"
        return f"<{format_series(self)}{tail}>"


def random_series(field, rng, low: int, prec: int) -> "Series":
    coeffs = {k: field.random(rng) for k in range(low, prec)}
    return Series(field, coeffs, prec)


def random_unit_series(field, rng, prec: int) -> "Series":
    s = random_series(field, rng, 0, prec)
    s.coeffs[0] = field.random_nonzero(rng)
    return s


class LaurentMatrix:
    """Square matrix over F_{q^m}((z)) with per-entry precision tracking."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, field: FiniteField, rows):
        self.field = field
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        for r in self.rows:
            if len(r) != self.n:
                raise PreconditionError("matrix must be square")

    # constructors ----------------------------------------------------------

    @staticmethod
    def identity(field, n, prec=INF) -> "LaurentMatrix":
        return LaurentMatrix(field, [
            [Series.one(field, prec) if i == j else Series.zero(field, prec)
             for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(field, n, prec=INF) -> "LaurentMatrix":
        return LaurentMatrix(field, [[Series.zero(field, prec)] * n
                                     for _ in range(n)])

    @staticmethod
    def z_diag(field, exponents, prec=INF) -> "LaurentMatrix":
        n = len(exponents)
        return LaurentMatrix(field, [
            [Series.z_power(field, exponents[i], prec) if i == j
             else Series.zero(field, prec) for j in range(n)]
            for i in range(n)])

    @staticmethod
    def from_weyl(field, element, prec=INF) -> "LaurentMatrix":
        """Matrix z^t * M_w of an affine Weyl element (GL_n only)."""
        perm = element.perm()
        t = element.translation
        n = len(perm)
        rows = [[Series.zero(field, prec) for _ in range(n)] for _ in range(n)]
        for j in range(n):
            i = perm[j]
            rows[i][j] = Series.z_power(field, t[i], prec)
        return LaurentMatrix(field, rows)

    # inspection ------------------------------------------------------------

    def precision(self):
        return min(e.prec for r in self.rows for e in r)

    def entry(self, i, j) -> Series:
        return self.rows[i][j]

    def min_valuation_floor(self):
        return min(e.valuation_floor() for r in self.rows for e in r)

    def __eq__(self, other):
        return (isinstance(other, LaurentMatrix) and self.field == other.field
                and self.rows == other.rows)

    def agrees_with(self, other: "LaurentMatrix") -> bool:
        return all(self.rows[i][j].agrees_with(other.rows[i][j])
                   for i in range(self.n) for j in range(self.n))

    def residual_valuation(self, other: "LaurentMatrix"):
        """min over entries of valuation_floor(self - other)."""
        diff = self - other
        return min(e.valuation_floor() for r in diff.rows for e in r)

    # arithmetic --------------------------------------------------------------

    def __add__(self, other):
        return LaurentMatrix(self.field, [
            [a + b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return LaurentMatrix(self.field, [
            [a - b for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.rows, other.rows)])

    def __mul__(self, other):
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for i in range(n):
            row = self.rows[i]
            out_row = []
            for j in range(n):
                col = cols[j]
                acc = row[0] * col[0]
                for k in range(1, n):
                    acc = acc + row[k] * col[k]
                out_row.append(acc)
            out.append(out_row)
        return LaurentMatrix(self.field, out)

    def truncate(self, prec) -> "LaurentMatrix":
        return LaurentMatrix(self.field,
                             [[e.truncate(prec) for e in r] for r in self.rows])

    def sigma(self) -> "LaurentMatrix":
        return LaurentMatrix(self.field,
                             [[e.sigma() for e in r] for r in self.rows])

    def sigma_pow(self, j: int) -> "LaurentMatrix":
        j %= self.field.m
        out = self
        for _ in range(j):
            out = out.sigma()
        return out

    def norm(self, s: int) -> "LaurentMatrix":
        """g * sigma(g) * ... * sigma^{s-1}(g), by binary splitting."""
        if s < 1:
            raise PreconditionError("norm needs s >= 1")
        if s == 1:
            return self
        half = s // 2
        left = self.norm(half)
        right = left.sigma_pow(half)
        out = left * right
        if s % 2:
            out = out * self.sigma_pow(s - 1)
        return out

    def inverse(self) -> "LaurentMatrix":
        """Gauss-Jordan with minimal-valuation pivoting."""
        n = self.n
        f = self.field
        if n == 2:
            a, b = self.rows[0]
            c, d = self.rows[1]
            det = a * d - b * c
            det_inv = det.inverse()
            return LaurentMatrix(f, [[d * det_inv, -(b * det_inv)],
                                     [-(c * det_inv), a * det_inv]])
        a = [list(r) for r in self.rows]
        prec = self.precision()
        b = [[Series.one(f, prec) if i == j else Series.zero(f, prec)
              for j in range(n)] for i in range(n)]
        used = [False] * n
        where = [None] * n
        for col in range(n):
            piv, piv_val = None, None
            for r in range(n):
                if used[r]:
                    continue
                v = a[r][col].valuation()
                if v is not None and (piv_val is None or v < piv_val):
                    piv, piv_val = r, v
            if piv is None:
                bad = [a[r][col] for r in range(n) if not used[r]]
                if all(e.is_exact_zero() for e in bad):
                    raise Singular("matrix is singular")
                raise PrecisionLoss("no determinate pivot in column")
            used[piv] = True
            where[col] = piv
            inv_piv = a[piv][col].inverse()
            a[piv] = [e * inv_piv for e in a[piv]]
            b[piv] = [e * inv_piv for e in b[piv]]
            for r in range(n):
                if r != piv:
                    c = a[r][col]
                    if not c.is_zero_known():
                        a[r] = [x - c * y for x, y in zip(a[r], a[piv])]
                        b[r] = [x - c * y for x, y in zip(b[r], b[piv])]
        out = [b[where[j]] for j in range(n)]
        return LaurentMatrix(f, out)

    def det(self) -> Series:
        """Determinant by fraction-free expansion for small n, elimination
        otherwise."""
        n = self.n
        f = self.field
        if n <= 4:
            from itertools import permutations
            acc = Series.zero(f)
            for perm in permutations(range(n)):
                sign = _perm_sign(perm)
                term = self.rows[0][perm[0]]
                for i in range(1, n):
                    term = term * self.rows[i][perm[i]]
                acc = acc + (term if sign > 0 else -term)
            return acc
        a = [list(r) for r in self.rows]
        det = Series.one(f, self.precision())
        sign = 1
        for col in range(n):
            piv, piv_val = None, None
            for r in range(col, n):
                v = a[r][col].valuation()
                if v is not None and (piv_val is None or v < piv_val):
                    piv, piv_val = r, v
            if piv is None:
                if all(a[r][col].is_exact_zero() for r in range(col, n)):
                    return Series.zero(f)
                raise PrecisionLoss("determinant pivot indeterminate")
            if piv != col:
                a[piv], a[col] = a[col], a[piv]
                sign = -sign
            det = det * a[col][col]
            inv_piv = a[col][col].inverse()
            for r in range(col + 1, n):
                c = a[r][col]
                if not c.is_zero_known():
                    factor = c * inv_piv
                    a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
        if sign < 0:
            det = -det
        return det

    def charpoly(self) -> list:
        """Coefficients [c_0, ..., c_n] of det(T*I - A), division-free
        (Samuelson-Berkowitz)."""
        n = self.n
        f = self.field
        one = Series.one(f)
        zero = Series.zero(f)
        poly = [one]  # leading coefficient first
        for k in range(1, n + 1):
            akk = self.rows[k - 1][k - 1]
            row = self.rows[k - 1][: k - 1]
            col = [self.rows[i][k - 1] for i in range(k - 1)]
            tvec = [one, -akk]
            cur = list(col)
            for _ in range(2, k + 1):
                dotv = zero
                for x, y in zip(row, cur):
                    dotv = dotv + x * y
                tvec.append(-dotv)
                cur = [sum_series([self.rows[i][j] * cur[j]
                                   for j in range(k - 1)], f)
                       for i in range(k - 1)]
            poly = _poly_conv(tvec, poly, f, k + 1)
        return list(reversed(poly))

    def __repr__(self):
        from .literals import format_matrix
        return f"<matrix {format_matrix(self)}>"


def sum_series(items, field) -> Series:
    acc = Series.zero(field)
    for it in items:
        acc = acc + it
    return acc


def _poly_conv(a, b, field, out_len):
    zero = Series.zero(field)
    out = [zero] * out_len
    for i, x in enumerate(a):
        if x.is_zero_known() and x.prec == INF:
            continue
        for j, y in enumerate(b):
            if i + j < out_len:
                out[i + j] = out[i + j] + x * y
    return out


def _perm_sign(perm) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1
