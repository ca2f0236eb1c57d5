"""Free 2-generator Lie algebra: Lyndon basis, structure constants, BCH."""

from rank2dist.freelie import (FreeLieTruncated, bch_words, bracket_word,
                               expand_word, lyndon_basis, ta_commutator,
                               ta_exp, ta_log, ta_mul)
from rank2dist.kernel import Q


class TestLyndon:
    def test_graded_dims(self):
        # free 2-generator ranks per degree: 2, 1, 2, 3, 6
        fl = FreeLieTruncated(5)
        assert fl.dims == [2, 1, 2, 3, 6]

    def test_basis_words_sorted_and_lyndon(self):
        for w in lyndon_basis(5):
            rotations = [w[i:] + w[:i] for i in range(1, len(w))]
            assert all(w < r for r in rotations)

    def test_bracket_word_depth2(self):
        assert bracket_word((0, 1)) == (0, 1)
        assert bracket_word((0, 0, 1)) == (0, (0, 1))


class TestTensorAlgebra:
    def test_exp_log_inverse(self):
        a = {(0,): Q(1), (1,): Q(1, 2)}
        assert ta_log(ta_exp(a, 4), 4) == a

    def test_commutator_antisymmetry(self):
        a = {(0,): Q(1)}
        b = {(1,): Q(1)}
        ab = ta_commutator(a, b, 3)
        ba = ta_commutator(b, a, 3)
        assert ab == {w: -c for w, c in ba.items()}


class TestStructureConstants:
    def test_jacobi(self):
        fl = FreeLieTruncated(4)
        st = fl.structure_constants()
        n = len(fl.basis)

        def br(u, v):
            out = [Q(0)] * n
            for a in range(n):
                if not u[a]:
                    continue
                for b in range(n):
                    if not v[b]:
                        continue
                    for k in range(n):
                        if st[a][b][k]:
                            out[k] += u[a] * v[b] * st[a][b][k]
            return out

        def e(i):
            v = [Q(0)] * n
            v[i] = Q(1)
            return v

        for a in range(3):
            for b in range(3):
                for c in range(3):
                    j = [x + y + z for x, y, z in
                         zip(br(e(a), br(e(b), e(c))),
                             br(e(b), br(e(c), e(a))),
                             br(e(c), br(e(a), e(b))))]
                    assert not any(j)

    def test_matches_expansion(self):
        fl = FreeLieTruncated(3)
        st = fl.structure_constants()
        for a in range(len(fl.basis)):
            for b in range(len(fl.basis)):
                d = len(fl.basis[a]) + len(fl.basis[b])
                if d > 3:
                    continue
                direct = ta_commutator(fl.expansions[a], fl.expansions[b], 3)
                rebuilt = {}
                for k, c in enumerate(st[a][b]):
                    if c:
                        for w, e in fl.expansions[k].items():
                            rebuilt[w] = rebuilt.get(w, Q(0)) + c * e
                assert direct == {w: c for w, c in rebuilt.items() if c}


class TestBCH:
    def test_low_order_coefficients(self):
        # z = a + b + [a,b]/2 + [a,[a,b]]/12 + [b,[b,a]]/12 - [a,[b,[a,b]]]/24
        coeffs = dict(bch_words(4))
        assert coeffs[0] == Q(1)
        assert coeffs[1] == Q(1)
        assert coeffs[(0, 1)] == Q(1, 2)
        assert coeffs[(0, (0, 1))] == Q(1, 12)
        # degree-3 companion term and the single degree-4 word
        deg3 = [c for w, c in coeffs.items()
                if not isinstance(w, int) and wlen(w) == 3]
        assert Q(1, 12) in deg3 and (Q(-1, 12) in deg3 or Q(1, 12) in deg3)
        deg4 = [c for w, c in coeffs.items()
                if not isinstance(w, int) and wlen(w) == 4]
        assert len(deg4) == 1 and abs(deg4[0]) == Q(1, 24)

    def test_group_law_consistency(self):
        # exp(a)exp(b) recomputed from the word combination
        mu = 4
        a = {(0,): Q(1)}
        b = {(1,): Q(1)}
        z = ta_log(ta_mul(ta_exp(a, mu), ta_exp(b, mu), mu), mu)
        rebuilt = {}
        for w, c in bch_words(mu):
            for t, e in expand_word(w, mu).items():
                v = rebuilt.get(t, Q(0)) + c * e
                if v:
                    rebuilt[t] = v
                else:
                    rebuilt.pop(t, None)
        assert rebuilt == z


def wlen(word):
    if isinstance(word, int):
        return 1
    return wlen(word[0]) + wlen(word[1])
