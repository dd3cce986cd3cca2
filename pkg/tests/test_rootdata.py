import random
from fractions import Fraction
from itertools import product

import pytest

from shtuka.errors import PreconditionError
from shtuka.rootdata import RootDatum, parse_coweight, format_coweight

GL2 = RootDatum.gl(2)
GL3 = RootDatum.gl(3)
GL5 = RootDatum.gl(5)


def brute_dominance(datum, mu1, mu2, bound=6):
    """Oracle: search small non-negative integral coroot combinations."""
    diff = tuple(b - a for a, b in zip(mu1, mu2))
    k = len(datum.simple_coroots)
    for coeffs in product(range(bound), repeat=k):
        acc = [0] * datum.rank
        for c, av in zip(coeffs, datum.simple_coroots):
            for i in range(datum.rank):
                acc[i] += c * av[i]
        if tuple(acc) == diff:
            return True
    return False


def test_dominance_simple_coroot():
    assert GL2.dominance_leq((0, 0), (1, -1))


def test_dominance_paper_example():
    nu = (Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 3),
          Fraction(1, 3))
    assert GL5.dominance_leq(nu, (Fraction(1), Fraction(1), Fraction(0),
                                  Fraction(0), Fraction(0)))


def test_dominance_false_case():
    assert not GL2.dominance_leq((1, 0), (0, 1))
    assert not brute_dominance(GL2, (1, 0), (0, 1))


def test_dominance_matches_brute_force():
    rng = random.Random(7)
    for _ in range(150):
        n = rng.choice([2, 3])
        datum = RootDatum.gl(n)
        a = tuple(rng.randrange(-2, 3) for _ in range(n))
        b = tuple(rng.randrange(-2, 3) for _ in range(n))
        assert datum.dominance_leq(a, b) == brute_dominance(datum, a, b)


def test_dominance_partial_order_on_kappa_fiber():
    rng = random.Random(11)
    for n in (3, 4):
        datum = RootDatum.gl(n)
        vecs = [tuple(rng.randrange(-4, 5) for _ in range(n))
                for _ in range(25)]
        for a in vecs:
            assert datum.dominance_leq(a, a)
        for a in vecs:
            for b in vecs:
                if datum.dominance_leq(a, b) and datum.dominance_leq(b, a):
                    assert a == b
        for a in vecs:
            for b in vecs:
                for c in vecs:
                    if datum.dominance_leq(a, b) and datum.dominance_leq(b, c):
                        assert datum.dominance_leq(a, c)


def test_dominant_representative():
    assert GL5.dominant_representative((1, 0, 1, 0, 0)) == (1, 1, 0, 0, 0)
    assert GL3.dominant_representative((0, 0, 0)) == (0, 0, 0)
    assert GL3.dominant_representative((0, 2, 1)) == (2, 1, 0)


def test_dominant_representative_is_sorting_for_gl():
    rng = random.Random(5)
    for _ in range(50):
        v = tuple(rng.randrange(-3, 4) for _ in range(4))
        datum = RootDatum.gl(4)
        assert datum.dominant_representative(v) == \
            tuple(sorted(v, reverse=True))


def test_all_permutations_share_dominant_representative():
    from itertools import permutations
    base = (2, 0, -1)
    reps = {GL3.dominant_representative(p) for p in permutations(base)}
    assert len(reps) == 1


def test_kottwitz_class():
    assert GL5.kottwitz_class((1, 0, 1, 0, 0)).degree == 2
    assert GL3.kottwitz_class((0, 0, 0)).degree == 0
    assert GL2.kottwitz_class((1, -1)).degree == 0
    assert GL2.kottwitz_class((1, -1)) == GL2.kottwitz_class((0, 0))


def test_kottwitz_additive_and_kills_coroots():
    rng = random.Random(3)
    for _ in range(30):
        a = tuple(rng.randrange(-3, 4) for _ in range(3))
        b = tuple(rng.randrange(-3, 4) for _ in range(3))
        s = tuple(x + y for x, y in zip(a, b))
        assert GL3.kottwitz_class(s).degree == \
            GL3.kottwitz_class(a).degree + GL3.kottwitz_class(b).degree
    for av in GL3.simple_coroots:
        assert GL3.kottwitz_class(av) == GL3.kottwitz_class((0, 0, 0))


def test_newton_chain_length_examples():
    assert GL2.newton_chain_length((1, 0), (1, 0)) == 0
    assert GL2.newton_chain_length(
        (1, 0), (Fraction(1, 2), Fraction(1, 2))) == 1
    nu = (Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), Fraction(1, 3),
          Fraction(1, 3))
    assert GL5.newton_chain_length((1, 1, 0, 0, 0), nu) == 4


def test_newton_chain_length_precondition():
    with pytest.raises(PreconditionError):
        GL2.newton_chain_length((1, 0), (2, -1))


def test_rho_duality_holds_for_custom_datum():
    # type B_2: alpha_1 = e1 - e2, alpha_2 = e2
    datum = RootDatum(2, [(1, -1), (0, 1)], [(1, -1), (0, 2)], name="b2")
    assert len(datum.positive_roots) == 4
    for av in datum.simple_coroots:
        assert sum(r * c for r, c in zip(datum.rho, av)) == 1


def test_invalid_cartan_rejected():
    with pytest.raises(PreconditionError):
        RootDatum(2, [(1, -1), (1, -1)], [(1, -1), (1, 0)])


def test_coweight_literals_round_trip():
    for text in ("[1,0,1,0,0]", "[1/2,1/2,1/3,1/3,1/3]", "[-2,3]"):
        v = parse_coweight(text)
        assert parse_coweight(format_coweight(v)) == v
