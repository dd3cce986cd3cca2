"""Parsing and formatting of the element literals used on the wire.

Grammar summary:

* coweights:      ``[1,0,1,0,0]``, ``[1/2,1/2,1/3,1/3,1/3]``
* series:         ``1 + (t+1)*z^2 - z^3``, ``z^-2``, ``t*z``
* matrices:       ``[0, z; 1, 0]`` (rows split on ``;``) or ``[[0,z],[1,0]]``
* Weyl elements:  ``w:(1 3)(2 5 4) t:[1,1,0,0,0]`` meaning the product
                  (permutation) * z^t; one-line form ``w:[3,5,1,2,4]`` is
                  accepted too.  Cycle entries are 1-indexed.
* field specs:    ``p=2,e=1,m=2,mod=t^2+t+1``

Formatting inverts parsing exactly; emitted literals re-parse to equal
values.
"""

import re

from .errors import PreconditionError
from .laurent import INF, FiniteField, LaurentMatrix, Series, _poly_digits
from .weyl import AffineWeylElement, cycles_of_perm, from_perm_times_translation

# -- field specs ------------------------------------------------------------


def parse_field_spec(text: str) -> FiniteField:
    parts = dict(kv.split("=", 1) for kv in text.split(",") if kv.strip())
    p = int(parts.get("p", 2))
    e = int(parts.get("e", 1))
    m = int(parts.get("m", 1))
    modulus = None
    if "mod" in parts:
        modulus = _parse_t_poly(parts["mod"], p)
    return FiniteField(p, e, m, modulus)


def _parse_t_poly(text: str, p: int) -> int:
    """A polynomial in t over F_p, returned in base-p integer encoding."""
    s = text.replace(" ", "").replace("-", "+-")
    if s.startswith("+"):
        s = s[1:]
    digits: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            continue
        m = re.fullmatch(r"(-?\d+)?\*?(t(\^(\d+))?)?", term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise PreconditionError(f"bad t-polynomial term: {term!r}")
        coef = int(m.group(1)) if m.group(1) not in (None, "-") else (
            -1 if m.group(1) == "-" else 1)
        if m.group(2) is None:
            exp = 0
        elif m.group(4) is not None:
            exp = int(m.group(4))
        else:
            exp = 1
        digits[exp] = (digits.get(exp, 0) + coef) % p
    out = 0
    for exp, c in digits.items():
        out += (c % p) * p ** exp
    return out


def format_field_element(field: FiniteField, a: int) -> str:
    return field.format_elt(a)


# -- series -------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""^
    (?:\((?P<paren>[^()]*)\)|(?P<plain>[-]?[0-9]*t(?:\^[0-9]+)?|[-]?[0-9]+))?
    (?:\*?(?P<z>z)(?:\^(?P<exp>-?[0-9]+))?)?
    $""", re.VERBOSE)


def _split_terms(text: str):
    """Split on top-level + and - (parentheses and exponents respected)."""
    terms = []
    depth = 0
    cur = ""
    prev = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and prev != "^":
            terms.append(cur)
            cur = ch if ch == "-" else ""
        elif not (ch == "+" and depth == 0 and not cur.strip()):
            cur += ch
        if not ch.isspace():
            prev = ch
    if cur.strip():
        terms.append(cur)
    return terms


def parse_series(field: FiniteField, text: str, prec=None) -> Series:
    if prec is None:
        prec = INF
    coeffs: dict[int, int] = {}
    cleaned = text.replace(" ", "")
    if cleaned in ("", "0"):
        return Series(field, {}, prec)
    for term in _split_terms(cleaned):
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        m = _TERM_RE.match(term)
        if not m or (m.group("paren") is None and m.group("plain") is None
                     and m.group("z") is None):
            raise PreconditionError(f"bad series term: {term!r}")
        if m.group("paren") is not None:
            c = _parse_t_poly(m.group("paren"), field.p)
        elif m.group("plain") is not None:
            plain = m.group("plain")
            if "t" in plain:
                c = _parse_t_poly(plain, field.p)
            else:
                c = int(plain) % field.p
        else:
            c = 1
        if m.group("z"):
            exp = int(m.group("exp")) if m.group("exp") else 1
        else:
            exp = 0
        if c >= field.size:
            raise PreconditionError("coefficient outside the field")
        if neg:
            c = field.neg(c)
        prev = coeffs.get(exp, 0)
        total = field.add(prev, c)
        if total:
            coeffs[exp] = total
        elif exp in coeffs:
            del coeffs[exp]
    return Series(field, coeffs, prec)


def format_series(s: Series) -> str:
    if not s.coeffs:
        return "0"
    field = s.field
    parts = []
    for exp in sorted(s.coeffs):
        c = s.coeffs[exp]
        cs = field.format_elt(c)
        need_paren = ("+" in cs) or ("*" in cs)
        if exp == 0:
            parts.append(f"({cs})" if need_paren else cs)
            continue
        zs = "z" if exp == 1 else f"z^{exp}"
        if cs == "1":
            parts.append(zs)
        elif need_paren or cs == "t" or cs.startswith("t^"):
            parts.append(f"({cs})*{zs}")
        else:
            parts.append(f"{cs}*{zs}")
    return " + ".join(parts)


# -- matrices -----------------------------------------------------------------


def parse_matrix(field: FiniteField, text: str, prec=None) -> LaurentMatrix:
    body = text.strip()
    if ";" in body:
        if not (body.startswith("[") and body.endswith("]")):
            raise PreconditionError("matrix literal must be bracketed")
        rows_text = body[1:-1].split(";")
        rows = [[cell for cell in _split_cells(r)] for r in rows_text]
    elif body.startswith("[["):
        inner = body[1:-1].strip()
        rows = []
        for rt in re.findall(r"\[([^\[\]]*)\]", inner):
            rows.append(_split_cells(rt))
    else:
        raise PreconditionError(f"bad matrix literal: {text!r}")
    parsed = [[parse_series(field, cell, prec) for cell in row] for row in rows]
    n = len(parsed)
    if any(len(r) != n for r in parsed):
        raise PreconditionError("matrix literal is not square")
    return LaurentMatrix(field, parsed)


def _split_cells(row_text: str):
    cells = []
    depth = 0
    cur = ""
    for ch in row_text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            cells.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        cells.append(cur.strip())
    return cells


def format_matrix(m: LaurentMatrix) -> str:
    rows = [", ".join(format_series(e) for e in r) for r in m.rows]
    return "[" + "; ".join(rows) + "]"


# -- affine Weyl elements -------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int):
    """1-indexed cycle notation -> 0-indexed one-line permutation."""
    perm = list(range(n))
    body = text.strip()
    if body in ("", "()", "id", "1"):
        return tuple(perm)
    consumed = re.sub(_CYCLE_RE, "", body).strip()
    if consumed:
        raise PreconditionError(f"bad cycle literal: {text!r}")
    for cyc in _CYCLE_RE.findall(body):
        entries = [int(x) - 1 for x in re.split(r"[,\s]+", cyc.strip()) if x]
        if len(set(entries)) != len(entries):
            raise PreconditionError("repeated entry in cycle")
        for a in entries:
            if not 0 <= a < n:
                raise PreconditionError("cycle entry out of range")
        for i, a in enumerate(entries):
            perm[a] = entries[(i + 1) % len(entries)]
    return tuple(perm)


def format_cycles(perm) -> str:
    cycles = cycles_of_perm(perm)
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles)


def parse_weyl(text: str, n: int) -> AffineWeylElement:
    """Parse ``w:(..)(..) t:[..]``; either part may be omitted."""
    body = text.strip()
    wm = re.search(r"w:((?:\([^()]*\))+|\[[^\]]*\]|id|1)", body)
    tm = re.search(r"t:(\[[^\]]*\])", body)
    if wm is None and tm is None:
        raise PreconditionError(f"bad element literal: {text!r}")
    if wm:
        wtext = wm.group(1)
        if wtext.startswith("["):
            entries = [int(x) - 1 for x in wtext[1:-1].split(",") if x.strip()]
            if sorted(entries) != list(range(n)):
                raise PreconditionError("one-line permutation is invalid")
            perm = tuple(entries)
        else:
            perm = parse_cycles(wtext, n)
    else:
        perm = tuple(range(n))
    if tm:
        t = [int(x) for x in tm.group(1)[1:-1].split(",") if x.strip()]
        if len(t) != n:
            raise PreconditionError("translation length mismatch")
    else:
        t = [0] * n
    return from_perm_times_translation(perm, t)


def format_weyl(x: AffineWeylElement) -> str:
    perm = x.perm()
    # translation in the literal order (permutation first): t = w^{-1} lambda
    t = tuple(x.translation[perm[j]] for j in range(len(perm)))
    return f"w:{format_cycles(perm)} t:[" + ",".join(str(v) for v in t) + "]"
