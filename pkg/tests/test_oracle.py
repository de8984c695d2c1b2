import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from redeploy import CapExceededError, STAY, Transfer, UnknownIdError, \
    brute_force_lorenz_dominant, brute_force_v, descending_prefix_sums, \
    enumerate_transfers, lorenz_dominates, post_transfer_deficits, \
    random_instance, validate
from tests.conftest import naive_enumerate


def test_lorenz_examples():
    assert lorenz_dominates((1, 1, 2), (0, 2, 2))
    assert not lorenz_dominates((0, 2, 2), (1, 1, 2))
    # classic utilitarian-versus-egalitarian standoff: incomparable
    assert not lorenz_dominates((10, 10), (15, 0))
    assert not lorenz_dominates((15, 0), (10, 10))
    assert lorenz_dominates((3, 1, 4), (3, 1, 4))


def test_lorenz_on_fractions():
    assert lorenz_dominates((Fraction(3, 2), Fraction(3, 2)), (1, 2))
    assert not lorenz_dominates((1, 2), (Fraction(3, 2), Fraction(3, 2)))


def test_lorenz_dimension_mismatch():
    with pytest.raises(ValueError):
        lorenz_dominates((1,), (1, 2))


def test_prefix_sums():
    assert descending_prefix_sums((1, 3, 2)) == (3, 5, 6)


vectors = st.lists(st.integers(0, 30), min_size=1, max_size=7)


@settings(max_examples=200, deadline=None)
@given(vectors)
def test_lorenz_reflexive(values):
    assert lorenz_dominates(values, values)


@settings(max_examples=200, deadline=None)
@given(vectors, st.data())
def test_lorenz_transitive(a, data):
    size = len(a)
    b = data.draw(st.lists(st.integers(0, 30), min_size=size, max_size=size))
    c = data.draw(st.lists(st.integers(0, 30), min_size=size, max_size=size))
    if lorenz_dominates(a, b) and lorenz_dominates(b, c):
        assert lorenz_dominates(a, c)


@settings(max_examples=200, deadline=None)
@given(vectors, st.data())
def test_mutual_dominance_means_equal_multisets(a, data):
    b = data.draw(st.lists(st.integers(0, 30),
                           min_size=len(a), max_size=len(a)))
    if lorenz_dominates(a, b) and lorenz_dominates(b, a):
        assert sorted(a) == sorted(b)


def test_enumerate_small_fixture(small_instance):
    transfers = list(enumerate_transfers(small_instance))
    assert Transfer.all_stay(small_instance) in transfers
    best = [t for t in transfers
            if post_transfer_deficits(small_instance, t).sorted_multiset()
            == (2, 1, 1)]
    assert len(best) == 3


def test_enumerate_single_teacher():
    instance = validate({
        "surplus_schools": [{"id": "s", "alpha": 1}],
        "deficit_schools": [{"id": "d", "beta": 1}],
        "teachers": [{"id": "t", "origin": "s", "acceptable": ["d"]}],
    })
    transfers = list(enumerate_transfers(instance))
    assert [t.to_mapping() for t in transfers] == [{"t": "d"}, {"t": STAY}]


def test_enumerate_order_matches_tie_break(small_instance):
    from redeploy import tie_break_key

    keys = [tie_break_key(small_instance, t)
            for t in enumerate_transfers(small_instance)]
    assert keys == sorted(keys)
    assert len(keys) == len(set(keys))


def test_enumerate_matches_independent_generator():
    rng = random.Random(4242)
    for _ in range(50):
        instance = random_instance(rng.randrange(2 ** 32),
                                   surplus=rng.randint(1, 3),
                                   deficit=rng.randint(1, 4),
                                   teachers=rng.randint(1, 5))
        ours = {t.assignment for t in enumerate_transfers(instance)}
        naive = {t.assignment for t in naive_enumerate(instance)}
        assert ours == naive


def test_enumeration_cap():
    instance = random_instance(1, surplus=3, deficit=5, teachers=6,
                               accept_prob=1.0)
    with pytest.raises(CapExceededError):
        list(enumerate_transfers(instance, cap=10))


def test_brute_force_dominant_fixtures(small_instance, rounding_instance):
    multiset, winners = brute_force_lorenz_dominant(small_instance)
    assert multiset == (2, 1, 1)
    assert len(winners) == 3
    for winner in winners:
        assert post_transfer_deficits(
            small_instance, winner).sorted_multiset() == multiset
    multiset, _ = brute_force_lorenz_dominant(rounding_instance)
    assert multiset == (5, 5, 4, 4, 4, 4, 4)


def test_brute_force_dominant_no_moves():
    instance = validate({
        "surplus_schools": [{"id": "s", "alpha": 1}],
        "deficit_schools": [{"id": "d1", "beta": 2}, {"id": "d2", "beta": 1}],
        "teachers": [],
    })
    multiset, winners = brute_force_lorenz_dominant(instance)
    assert multiset == (2, 1)
    assert winners == (Transfer.from_mapping({}),)


def test_brute_force_v_examples(rounding_instance):
    assert brute_force_v(rounding_instance, {"d3", "d4", "d5"}) == 2
    assert brute_force_v(rounding_instance, set()) == 0
    with pytest.raises(UnknownIdError):
        brute_force_v(rounding_instance, {"zzz"})


def test_dominant_outcome_dominates_everything(small_instance):
    multiset, _ = brute_force_lorenz_dominant(small_instance)
    for transfer in naive_enumerate(small_instance):
        after = post_transfer_deficits(small_instance, transfer)
        assert lorenz_dominates(multiset, after.sorted_multiset())
