import random
from fractions import Fraction

import pytest

from cobordseries.groups import (
    COUNTING, FiniteGroup, builtin_group, convolve, cyclic,
    delta, dump_cayley_file, haar_uniform, is_class_function,
    load_cayley_file, quaternion8, random_group_function, symmetric3,
)
from cobordseries.matrices import RationalMatrix


# -- exact matrices ---------------------------------------------------------

def test_matrix_inverse_hand_example():
    m = RationalMatrix([[1, 1], [0, 1]])
    assert m.inverse() == RationalMatrix([[1, -1], [0, 1]])


def test_matrix_inverse_round_trip():
    rng = random.Random(1)
    for _ in range(20):
        m = RationalMatrix([[Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                             for _ in range(3)] for _ in range(3)])
        try:
            inv = m.inverse()
        except ValueError:
            continue
        assert m * inv == RationalMatrix.identity(3)
        assert inv * m == RationalMatrix.identity(3)


def test_matrix_singular_raises():
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2], [2, 4]]).inverse()


def test_matrix_ring_axioms_random():
    rng = random.Random(2)

    def rand():
        return RationalMatrix([[Fraction(rng.randint(-4, 4)) for _ in range(2)]
                               for _ in range(2)])

    for _ in range(25):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) * c == a * c + b * c
        assert a + (-a) == RationalMatrix.zeros(2)


def test_matrix_noncommutativity_witness():
    a = RationalMatrix.unit(2, 0, 1)
    b = RationalMatrix.unit(2, 1, 0)
    assert a * b != b * a


def test_matrix_scalar_and_power():
    m = RationalMatrix([[2, 0], [0, 3]])
    assert m * Fraction(1, 2) == RationalMatrix([[1, 0], [0, Fraction(3, 2)]])
    assert m ** 3 == RationalMatrix([[8, 0], [0, 27]])


# -- finite groups ----------------------------------------------------------

def test_builtin_groups_are_groups():
    for name in ["Z2", "Z5", "Z12", "S3", "Q8"]:
        g = builtin_group(name)
        assert g.mul(g.identity, 1) == 1
        for a in g.elements():
            assert g.mul(a, g.inv(a)) == g.identity


def test_bad_tables_rejected():
    with pytest.raises(ValueError):
        FiniteGroup("broken", [[0, 1], [1, 1]])
    with pytest.raises(ValueError):
        FiniteGroup("shifted", [[1, 0], [0, 1]])


def test_s3_conjugacy_classes():
    s3 = symmetric3()
    classes = {frozenset(c) for c in s3.conjugacy_classes()}
    assert classes == {frozenset({0}), frozenset({1, 2, 3}), frozenset({4, 5})}
    assert s3.center() == (0,)
    assert not s3.is_abelian


def test_q8_structure():
    q8 = quaternion8()
    assert sorted(q8.center()) == [0, 1]  # {1, -1}
    assert len(q8.conjugacy_classes()) == 5
    i, j, k = 2, 4, 6
    assert q8.mul(i, j) == k
    assert q8.mul(j, i) == q8.inv(k)


def test_cayley_file_round_trip(tmp_path):
    path = tmp_path / "s3.json"
    dump_cayley_file(symmetric3(), path)
    loaded = load_cayley_file(path)
    assert loaded.table == symmetric3().table
    assert loaded.labels == symmetric3().labels


def test_cayley_file_validation(tmp_path):
    import json

    path = tmp_path / "bad.json"
    with open(path, "w") as fh:
        json.dump({"order": 2, "labels": ["e", "g"], "table": [[0, 1], [1, 0]],
                   "inverses": [1, 0]}, fh)
    with pytest.raises(ValueError):
        load_cayley_file(path)
    with open(path, "w") as fh:
        json.dump({"order": 2, "labels": ["e", "g"], "table": [[0, 1], [1, 0]],
                   "extra": 1}, fh)
    with pytest.raises(ValueError):
        load_cayley_file(path)


# -- convolution algebra ----------------------------------------------------

def test_delta_is_unit_probability():
    g = symmetric3()
    rng = random.Random(3)
    f = random_group_function(g, rng)
    assert convolve(delta(g), f) == f
    assert convolve(f, delta(g)) == f


def test_delta_squared_counting_z2():
    z2 = cyclic(2)
    d1 = delta(z2, 1, normalization=COUNTING)
    assert convolve(d1, d1) == delta(z2, 0, normalization=COUNTING)


def test_uniform_convolution_averages():
    g = cyclic(5)
    rng = random.Random(4)
    f = random_group_function(g, rng)
    mean = sum(f.values, Fraction(0)) / g.order
    assert convolve(haar_uniform(g), f) == haar_uniform(g) * mean


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "S3", "Q8"])
def test_convolution_associativity_small_groups(name):
    g = builtin_group(name)
    rng = random.Random(g.order)
    for _ in range(3):
        f1 = random_group_function(g, rng)
        f2 = random_group_function(g, rng)
        f3 = random_group_function(g, rng)
        assert convolve(convolve(f1, f2), f3) == convolve(f1, convolve(f2, f3))


def test_class_functions_are_central_on_s3():
    s3 = symmetric3()
    rng = random.Random(5)
    class_fn_values = {}
    for cls in s3.conjugacy_classes():
        v = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        for x in cls:
            class_fn_values[x] = v
    from cobordseries.groups import GroupFunction

    f = GroupFunction(s3, tuple(class_fn_values[x] for x in s3.elements()))
    assert is_class_function(f)
    for _ in range(5):
        g = random_group_function(s3, rng)
        assert convolve(f, g) == convolve(g, f)


def test_is_class_function_examples():
    s3 = symmetric3()
    assert is_class_function(delta(s3))
    from cobordseries.groups import GroupFunction

    not_class = GroupFunction(s3, (0, 1, 0, 0, 0, 0))
    assert not is_class_function(not_class)


def test_group_mismatch_raises():
    f = delta(cyclic(2))
    g = delta(cyclic(3))
    with pytest.raises(ValueError):
        convolve(f, g)
    with pytest.raises(ValueError):
        convolve(delta(cyclic(2)), delta(cyclic(2), normalization=COUNTING))
