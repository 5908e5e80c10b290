import random

import pytest
from hypothesis import given, settings, strategies as st

from strataplan.braids import (
    BraidWord,
    concentric_generator,
    conjugate,
    conjugation_image,
    encircling_generator,
    hub_property,
    in_commutator_subgroup,
    is_pure,
    linking_matrix,
    linking_rank,
    permutation_of,
)
from strataplan.errors import IndexOutOfRange, NotPure


def random_pure_word(n, length, rng):
    """Random word closed up to a pure braid by undoing its permutation with
    adjacent transpositions (a bubble sort on the final strand order)."""
    letters = [rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(length)]
    at = list(range(n))
    for v in letters:
        p = abs(v) - 1
        at[p], at[p + 1] = at[p + 1], at[p]
    # bubble-sort `at` back to identity, recording the swaps
    fixes = []
    changed = True
    while changed:
        changed = False
        for p in range(n - 1):
            if at[p] > at[p + 1]:
                at[p], at[p + 1] = at[p + 1], at[p]
                fixes.append(p + 1)
                changed = True
    return BraidWord(n, tuple(letters + fixes))


# ---------------------------------------------------------------------------
# words, permutations, purity


def test_word_validation():
    with pytest.raises(IndexOutOfRange):
        BraidWord(2, (2,))
    with pytest.raises(IndexOutOfRange):
        BraidWord(3, (0,))


def test_word_text_round_trip():
    w = BraidWord.from_text(3, "s1 s2^-1 s2 s1^3 e")
    assert w.letters == (1, -2, 2, 1, 1, 1)
    assert BraidWord.from_text(3, w.to_text()) == w
    assert BraidWord.from_text(4, "e").letters == ()
    with pytest.raises(ValueError):
        BraidWord.from_text(3, "x7")


def test_permutation_of_single_generator():
    assert permutation_of(BraidWord(2, (1,))) == (2, 1)


def test_permutation_of_square_is_identity():
    assert permutation_of(BraidWord(2, (1, 1))) == (1, 2)


def test_permutation_of_composition_is_three_cycle():
    perm = permutation_of(BraidWord(3, (1, 2)))
    assert sorted(perm) == [1, 2, 3]
    assert perm != (1, 2, 3)
    seen = {1}
    cur = perm[0]
    while cur not in seen:
        seen.add(cur)
        cur = perm[cur - 1]
    assert len(seen) == 3


def test_is_pure_examples():
    assert is_pure(BraidWord(2, (1, 1)))
    assert not is_pure(BraidWord(2, (1,)))
    a = BraidWord(3, (1, 1))
    b = BraidWord(3, (2, 2))
    commutator = a * b * a.inverse() * b.inverse()
    assert is_pure(commutator)


# ---------------------------------------------------------------------------
# linking numbers


def test_linking_of_basic_square():
    m = linking_matrix(BraidWord(2, (1, 1)))
    assert m[1, 2] == 1


def test_linking_rejects_non_pure():
    with pytest.raises(NotPure):
        linking_matrix(BraidWord(2, (1,)))


def test_commutators_have_zero_linking():
    a = BraidWord(3, (1, 1))
    b = BraidWord(3, (2, 2))
    commutator = a * b * a.inverse() * b.inverse()
    assert linking_matrix(commutator).is_zero()
    assert in_commutator_subgroup(commutator)


def test_empty_word_in_commutator_subgroup():
    assert in_commutator_subgroup(BraidWord(3, ()))


def test_square_not_in_commutator_subgroup():
    assert not in_commutator_subgroup(BraidWord(3, (1, 1)))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(0, 12), st.integers(0, 12), st.randoms())
def test_linking_is_additive(n, la, lb, rnd):
    a = random_pure_word(n, la, rnd)
    b = random_pure_word(n, lb, rnd)
    va = linking_matrix(a).entries
    vb = linking_matrix(b).entries
    vab = linking_matrix(a * b).entries
    assert vab == tuple(x + y for x, y in zip(va, vb))
    vinv = linking_matrix(a.inverse()).entries
    assert vinv == tuple(-x for x in va)


# ---------------------------------------------------------------------------
# conjugation


def test_conjugate_by_empty_word():
    b = BraidWord(3, (1, 1))
    assert conjugate(b, BraidWord(3, ())) == b


def test_conjugate_of_empty_word_has_zero_linking():
    g = BraidWord(3, (1, -2, 1))
    w = conjugate(BraidWord(3, ()), g)
    assert len(w) == 2 * len(g)
    assert linking_matrix(w).is_zero()


def test_conjugation_image_worked_example():
    b = BraidWord(3, (1, 1))
    g = BraidWord(3, (2,))
    image = conjugation_image(b, g)
    assert image.as_dict() == {(1, 2): 0, (1, 3): 1, (2, 3): 0}


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 5), st.integers(0, 20), st.integers(0, 20), st.randoms())
def test_conjugation_matches_relabelling(n, lb, lg, rnd):
    b = random_pure_word(n, lb, rnd)
    g = BraidWord(
        n, tuple(rnd.choice([1, -1]) * rnd.randint(1, n - 1) for _ in range(lg))
    )
    # conjugation_image raises internally if the two routes disagree
    image = conjugation_image(b, g)
    assert image == linking_matrix(b).relabeled(permutation_of(g))


# ---------------------------------------------------------------------------
# concentric generators and rank


def test_concentric_generator_two_strands():
    g = concentric_generator(2, 1)
    assert g.letters == (1, 1)
    assert linking_matrix(g)[1, 2] == 1


def test_concentric_generator_three_strands():
    m = linking_matrix(concentric_generator(3, 1))
    assert (m[1, 2], m[1, 3], m[2, 3]) == (1, 1, 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_concentric_generator_support_pattern(n):
    for l in range(1, n):
        m = linking_matrix(concentric_generator(n, l))
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                expected = 1 if i == l and j > l else 0
                assert m[i, j] == expected


def test_concentric_generator_bad_index():
    with pytest.raises(IndexOutOfRange):
        concentric_generator(3, 3)


def test_encircling_generator_pattern():
    m = linking_matrix(encircling_generator(4, 3))
    assert m.as_dict() == {
        (1, 2): 0,
        (1, 3): 1,
        (1, 4): 0,
        (2, 3): 1,
        (2, 4): 0,
        (3, 4): 0,
    }


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_concentric_generators_linearly_independent(n):
    gens = [concentric_generator(n, l) for l in range(1, n)]
    assert linking_rank(gens) == n - 1


def test_linking_rank_scalar_multiples():
    assert linking_rank([BraidWord(2, (1, 1)), BraidWord(2, (1,) * 4)]) == 1


def test_linking_rank_empty():
    assert linking_rank([]) == 0


# ---------------------------------------------------------------------------
# hub property


def test_hub_property_examples():
    assert hub_property(concentric_generator(4, 1), 3)
    assert not hub_property(BraidWord(3, (1, 1)), 2)
    a = BraidWord(3, (1, 1))
    b = BraidWord(3, (2, 2))
    commutator = a * b * a.inverse() * b.inverse()
    assert not hub_property(commutator, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10), st.integers(0, 10), st.randoms())
def test_hub_property_conjugation_invariant(n, lb, lg, rnd):
    b = random_pure_word(n, lb, rnd)
    g = BraidWord(
        n, tuple(rnd.choice([1, -1]) * rnd.randint(1, n - 1) for _ in range(lg))
    )
    conj = conjugate(b, g)
    for k in range(1, n):
        assert hub_property(b, k) == hub_property(conj, k)


# ---------------------------------------------------------------------------
# separation witnesses (small versions; the acceptance suite scales them up)


def test_concentric_combinations_leave_commutator_subgroup():
    n = 4
    gens = [concentric_generator(n, l) for l in range(1, n)]
    rng = random.Random(9)
    for _ in range(50):
        coeffs = [rng.randint(-3, 3) for _ in gens]
        if all(c == 0 for c in coeffs):
            continue
        word = BraidWord(n, ())
        for g, c in zip(gens, coeffs):
            part = g if c > 0 else g.inverse()
            for _ in range(abs(c)):
                word = word * part
        assert not linking_matrix(word).is_zero()
        assert not in_commutator_subgroup(word)


def test_cluster_words_fail_hub_property():
    # strands 1..2 and 3..4 in separate clusters never link across, so no
    # strand can reach k = 2 partners
    n, k = 4, 2
    rng = random.Random(10)
    for _ in range(30):
        w = BraidWord(n, ())
        for lo, hi in ((1, 2), (3, 4)):
            letters = []
            for _ in range(rng.randint(0, 6)):
                letters.append(rng.choice([1, -1]) * rng.randint(lo, hi - 1))
            sub = BraidWord(n, tuple(letters))
            if not is_pure(sub):
                sub = sub * sub  # squares of transposition-like words are pure
            if is_pure(sub):
                w = w * sub
        if not is_pure(w):
            continue
        assert not hub_property(w, k)
