import random
from math import comb

import pytest

from setsmith.exact import IntMatrix, is_unimodular
from setsmith.scheme import (ParameterError, SchemeParams, bier_p,
                             block_multiplicity, c_coeff, d_diag, d_matrix,
                             d_product, d_prime_entries, degree, e_matrices,
                             eigenvalues, f_coeff, intersection_matrix,
                             ms_matrices, ms_matrix, scheme_element_matrix,
                             smith_group, triangular_check, w_matrix)
from setsmith.exact import group_from_diagonal
from setsmith.subsets import mu


def test_params_validation():
    SchemeParams(5, 2, 2, 0)
    with pytest.raises(ParameterError):
        SchemeParams(5, 3, 2, 0)
    with pytest.raises(ParameterError):
        SchemeParams(5, 2, 2, 3)
    with pytest.raises(ParameterError):
        SchemeParams(3, 2, 4, 0)


def test_degree():
    assert degree(5, 2, 0) == 3
    assert degree(12, 3, 2) == 27
    assert degree(9, 4, 4) == 1


def test_intersection_identity_when_ell_equals_k():
    m = intersection_matrix(SchemeParams(6, 3, 3, 3))
    assert m == IntMatrix.identity(comb(6, 3))


def test_petersen_row():
    m = intersection_matrix(SchemeParams(5, 2, 2, 0))
    row = dict(zip(m.col_labels, m.data[m.row_labels.index((1, 2))]))
    hits = sorted(s for s, v in row.items() if v)
    assert hits == [(3, 4), (3, 5), (4, 5)]


def test_intersection_row_sums_are_degree():
    for n, k, ell in [(6, 2, 1), (7, 3, 0), (8, 3, 2), (6, 3, 3)]:
        m = intersection_matrix(SchemeParams(n, k, k, ell))
        d = degree(n, k, ell)
        assert all(sum(row) == d for row in m.data)


def test_bier_p_small_example():
    p = bier_p(4, 2)
    assert p.col_labels == ((), (2,), (3,), (4,), (2, 4), (3, 4))
    assert p.data[p.row_labels.index((1, 2))] == [1, 1, 0, 0, 0, 0]


def test_bier_p_empty_column_is_all_ones():
    p = bier_p(6, 3)
    j = p.col_labels.index(())
    assert all(row[j] == 1 for row in p.data)


def test_bier_p_unimodular_sample():
    for n, k in [(4, 2), (6, 3), (8, 3), (9, 4)]:
        assert is_unimodular(bier_p(n, k)), (n, k)


def test_w_identity_zero_and_entries():
    for n, i in [(8, 2), (10, 3)]:
        assert w_matrix(n, i, i) == IntMatrix.identity(mu(n, i))
    z = w_matrix(12, 4, 3)
    assert z.shape() == (mu(12, 4), mu(12, 3)) == (275, 154)
    assert all(v == 0 for row in z.data for v in row)
    w = w_matrix(5, 1, 2)
    assert w.row_labels == ((2,), (3,), (4,), (5,))
    get = lambda a, b: w.data[w.row_labels.index(a)][w.col_labels.index(b)]
    assert get((2,), (2, 4)) == 1
    assert get((3,), (2, 4)) == 0


def test_c_coeff_closed_forms():
    for n, k in [(8, 3), (10, 2), (12, 3)]:
        # disjointness relation: only i = 0 contributes
        p = SchemeParams(n, k, k, 0)
        for j in range(k + 1):
            assert c_coeff(0, j, p) == comb(n - k - j, k - j)
            for i in range(1, k + 1):
                assert c_coeff(i, j, p) == 0
        # near-identity relation ell = k-1, i = j
        p = SchemeParams(n, k, k, k - 1)
        for i in range(k + 1):
            assert c_coeff(i, i, p) == (k - i) * (n - k)


def test_f_coeff_closed_forms():
    for n, k in [(8, 3), (11, 3), (10, 2)]:
        pj = SchemeParams(n, k, k, k - 1)
        pk = SchemeParams(n, k, k, 0)
        for i in range(k + 1):
            for j in range(k + 1):
                if i <= j:
                    # vanishing below the superdiagonal only holds there
                    if i == j:
                        want = (k - i) * (n - k - i) - i
                    elif i == j - 1:
                        want = k - i
                    else:
                        want = 0
                    assert f_coeff(i, j, pj) == want, (n, k, i, j)
                kneser = (-1) ** i * comb(n - k - j, k - j)
                assert f_coeff(i, j, pk) == kneser
    assert f_coeff(1, 0, SchemeParams(8, 3, 3, 0)) == -comb(5, 3)


def test_fundamental_w_product_identity():
    for n in (7, 9, 12):
        jmax = n // 2
        for j in range(jmax + 1):
            for i in range(j + 1):
                for s in range(i + 1):
                    lhs = w_matrix(n, s, i) @ w_matrix(n, i, j)
                    rhs = w_matrix(n, s, j).scale(comb(j - s, i - s))
                    assert lhs == rhs, (n, s, i, j)


def test_product_with_basis_matrix_entries():
    # (A P_kc)(A, beta) counts kc-sets through A and beta and must equal
    # c_coeff(|A n beta|, |beta|) -- checked exhaustively for n <= 9
    for n in range(2, 10):
        for kc in range(n + 1):
            p_mat = bier_p(n, kc)
            cmasks = [sum(1 << (e - 1) for e in s) for s in p_mat.col_labels]
            csizes = [len(s) for s in p_mat.col_labels]
            for kr in range(kc + 1):
                for ell in range(kr + 1):
                    p = SchemeParams(n, kr, kc, ell)
                    a_mat = intersection_matrix(p)
                    rmasks = [sum(1 << (e - 1) for e in s)
                              for s in a_mat.row_labels]
                    prod = a_mat @ p_mat
                    # c_coeff depends only on (|A n beta|, |beta|)
                    table = [[c_coeff(i, b, p) for b in range(kc + 1)]
                             for i in range(kr + 1)]
                    for r, am in enumerate(rmasks):
                        row = prod.data[r]
                        for c, (bm, bs) in enumerate(zip(cmasks, csizes)):
                            want = table[(am & bm).bit_count()][bs]
                            assert row[c] == want, (p, r, c)


def test_d_diag():
    assert d_diag(9, 1, 2) == [(2, 1), (1, mu(9, 1) - 1), (0, mu(9, 2) - mu(9, 1))]
    assert d_diag(10, 2, 2) == [(1, 1), (1, mu(10, 1) - 1),
                                (1, mu(10, 2) - mu(10, 1)), (0, 0)]
    assert d_diag(12, 2, 3) == [(3, 1), (2, 10), (1, 43), (0, mu(12, 3) - mu(12, 2))]
    assert d_product(12, 2, 3) == 3 * 2 ** 10
    assert d_prime_entries(12, 2, 3) == [3] + [2] * 10 + [1] * 43
    with pytest.raises(ParameterError):
        d_diag(8, 2, 4)


def test_e_matrices_construction():
    es = e_matrices(10, 3)
    assert es[0].data == [[1]]
    for s, e in enumerate(es):
        assert e.shape() == (mu(10, s), mu(10, s))
        assert is_unimodular(e)
    for j in range(4):
        for i in range(j + 1):
            assert es[i] @ w_matrix(10, i, j) == d_matrix(10, i, j) @ es[j]
    with pytest.raises(ParameterError):
        e_matrices(8, 4)


def test_triangular_check():
    assert triangular_check(SchemeParams(7, 2, 3, 1))
    assert triangular_check(SchemeParams(6, 2, 2, 2))
    assert triangular_check(SchemeParams(12, 3, 3, 1))


def test_ms_matrices_of_association_combination():
    p = SchemeParams(12, 3, 3, 3)
    coeffs = (0, 1, 3, 0)
    ms = ms_matrices(p, coeffs, 0)
    assert ms[0].entries.data == [[189, 33, 3, 0], [0, 57, 22, 3],
                                  [0, 0, 2, 3], [0, 0, 0, -6]]
    assert ms[1].entries.data == [[57, 11, 1], [0, 2, 2], [0, 0, -6]]
    assert ms[2].entries.data == [[2, 1], [0, -6]]
    assert ms[2].multiplicity == 43
    assert ms[3].entries.data == [[-6]]
    assert [m.multiplicity for m in ms] == [1, 10, 43, 100]


def test_ms_identity_relation():
    p = SchemeParams(9, 3, 3, 3)
    for s in range(4):
        m = ms_matrix(s, p)
        assert m.entries == IntMatrix.identity(4 - s)


def test_ms_published_block_shapes():
    # near-identity relation (Johnson), shift = degree, k = 2
    n = 9
    p = SchemeParams(n, 2, 2, 1)
    ms = ms_matrices(p, lam=degree(n, 2, 1))
    assert ms[0].entries.data == [[0, 2, 0], [0, -n, 2], [0, 0, -2 * n + 2]]
    assert ms[1].entries.data == [[-n, 1], [0, -2 * n + 2]]
    assert ms[2].entries.data == [[-2 * n + 2]]
    # k = 3 with shift = degree
    p = SchemeParams(n, 3, 3, 2)
    ms = ms_matrices(p, lam=degree(n, 3, 2))
    assert ms[0].entries.data == [[0, 3, 0, 0], [0, -n, 4, 0],
                                  [0, 0, -2 * n + 2, 3], [0, 0, 0, -3 * n + 6]]
    assert ms[1].entries.data == [[-n, 2, 0], [0, -2 * n + 2, 2],
                                  [0, 0, -3 * n + 6]]
    assert ms[2].entries.data == [[-2 * n + 2, 1], [0, -3 * n + 6]]
    assert ms[3].entries.data == [[-3 * n + 6]]
    # k = 3 adjacency
    ms = ms_matrices(p)
    assert ms[0].entries.data == [[3 * (n - 3), 3, 0, 0], [0, 2 * n - 9, 4, 0],
                                  [0, 0, n - 7, 3], [0, 0, 0, -3]]
    # disjointness relation (Kneser) k = 2 with shift = degree
    p = SchemeParams(n, 2, 2, 0)
    ms = ms_matrices(p, lam=degree(n, 2, 0))
    assert ms[0].entries.data == [
        [0, n - 3, 1],
        [0, -(n - 3) * n // 2, -2],
        [0, 0, -(n - 4) * (n - 1) // 2]]
    # rectangular case kr=2, kc=3, ell=1
    p = SchemeParams(n, 2, 3, 1)
    ms = ms_matrices(p)
    assert ms[0].entries.data == [
        [(n - 2) * (n - 3), 2 * (n - 3), 2, 0],
        [0, (n - 3) * (n - 6) // 2, 2 * (n - 5), 3],
        [0, 0, -2 * (n - 4), -6]]
    assert ms[1].entries.data == [[(n - 3) * (n - 6) // 2, n - 5, 1],
                                  [0, -2 * (n - 4), -4]]
    assert ms[2].entries.data == [[-2 * (n - 4), -2]]


def test_ms_upper_triangular_for_random_coeffs():
    rng = random.Random(11)
    for _ in range(20):
        n, k = rng.choice([(9, 3), (10, 3), (8, 2)])
        p = SchemeParams(n, k, k, k)
        coeffs = tuple(rng.randint(-3, 3) for _ in range(k + 1))
        lam = rng.randint(-3, 3)
        for s in range(k + 1):
            m = ms_matrix(s, p, coeffs, lam).entries
            for i in range(m.rows):
                for j in range(i):
                    assert m.data[i][j] == 0


def test_block_multiplicity_matches_mu_difference():
    # the closed formula agrees with the true count difference throughout
    # the range the block reduction uses (n >= 3s - 1)
    for n in range(0, 14):
        for s in range(5):
            if n >= 3 * s - 1:
                want = mu(n, s) - (mu(n, s - 1) if s else 0)
                assert block_multiplicity(n, s) == want


def test_smith_group_example():
    res = smith_group(SchemeParams(12, 3, 3, 3), (0, 1, 3, 0), 0)
    want = group_from_diagonal([(3, 2), (14364, 1), (2, 10), (342, 10),
                                (12, 43), (6, 100)])
    assert res.group == want
    assert [b.delta for b in res.blocks] == [(1, 3, 3, 14364), (1, 2, 342),
                                             (1, 12), (6,)]


def test_smith_group_kneser_adjacency_matches_eigenvalue_diagonal():
    # the disjointness matrix has a diagonal form listing its eigenvalues
    # C(5-j, 3-j) with multiplicity mu_j; as a group that's what the block
    # reduction must produce
    res = smith_group(SchemeParams(8, 3, 3, 0))
    want = group_from_diagonal([(comb(5 - j, 3 - j), mu(8, j))
                                for j in range(4)])
    assert res.group == want
    assert res.group.free_rank == 0


def test_smith_group_johnson_k2_laplacian_n6():
    res = smith_group(SchemeParams(6, 2, 2, 1), lam=degree(6, 2, 1))
    pooled = {}
    for b in res.blocks:
        for d in b.delta:
            pooled[d] = pooled.get(d, 0) + b.multiplicity
    assert pooled == {10: 4, 60: 4, 1: 4, 2: 2, 0: 1}


def test_smith_group_refuses_small_n():
    with pytest.raises(ParameterError):
        smith_group(SchemeParams(6, 3, 3, 0))


def test_smith_group_shift_folding_identity():
    # B - lam*I equals B with lam subtracted from the coefficient of the
    # identity relation (ell = k)
    p = SchemeParams(10, 3, 3, 3)
    rng = random.Random(12)
    for _ in range(5):
        coeffs = [rng.randint(-3, 3) for _ in range(4)]
        lam = rng.randint(-3, 3)
        a = smith_group(p, coeffs, lam)
        folded = list(coeffs)
        folded[3] -= lam
        b = smith_group(p, folded, 0)
        assert a.group == b.group


def test_smith_group_rectangular_rules():
    p = SchemeParams(9, 2, 3, 1)
    smith_group(p)  # fine
    with pytest.raises(ParameterError):
        smith_group(p, lam=1)
    with pytest.raises(ParameterError):
        smith_group(p, coeffs=(1, 1, 0))
    with pytest.raises(ParameterError):
        smith_group(SchemeParams(9, 3, 3, 3), coeffs=(1, 1))


def test_smith_group_matches_oracle_envelope():
    # feasible tuples across the supported sizes, both shapes, spot-checking
    # the larger-n end of the envelope
    from setsmith.oracle import brute_force_group
    cases = []
    for n in range(2, 13):
        for kc in (1, 2, 3):
            if n < 3 * kc - 1:
                continue
            for kr in range(1, kc + 1):
                for ell in range(kr + 1):
                    cases.append((n, kr, kc, ell))
    cases += [(20, 2, 2, 1), (31, 2, 2, 0), (14, 3, 3, 2), (14, 2, 3, 0)]
    rng = random.Random(13)
    picked = [c for c in cases if c[0] <= 9] + [c for c in cases if c[0] > 9]
    for n, kr, kc, ell in picked:
        p = SchemeParams(n, kr, kc, ell)
        lam = degree(n, kr, ell) if (kr == kc and rng.random() < 0.5) else 0
        assert smith_group(p, lam=lam).group == brute_force_group(
            p, lam=lam, cap=500), (n, kr, kc, ell, lam)


def test_eigenvalues_johnson_laplacian():
    for n, k in [(9, 2), (12, 3)]:
        p = SchemeParams(n, k, k, k - 1)
        spec = eigenvalues(p, lam=degree(n, k, k - 1))
        assert [s.eigenvalue for s in spec] == [-i * (n - i + 1) for i in range(k + 1)]
        assert [s.multiplicity for s in spec] == [mu(n, i) for i in range(k + 1)]
        assert sum(s.multiplicity for s in spec) == comb(n, k)


def test_eigenvalues_kneser_laplacians():
    n = 11
    spec = eigenvalues(SchemeParams(n, 2, 2, 0), lam=degree(n, 2, 0))
    assert [s.eigenvalue for s in spec] == [
        0, -(n - 3) * n // 2, -(n - 1) * (n - 4) // 2]
    spec = eigenvalues(SchemeParams(n, 3, 3, 0), lam=degree(n, 3, 0))
    assert [s.eigenvalue for s in spec] == [
        0,
        -(n - 4) * (n - 5) * n // 6,
        -(n - 1) * (n - 5) * (n - 6) // 6,
        -(n * n - 10 * n + 27) * (n - 2) // 6]


def test_eigenvalues_identity_relation():
    n, k = 10, 3
    spec = eigenvalues(SchemeParams(n, k, k, k))
    assert all(s.eigenvalue == 1 for s in spec)
    assert sum(s.multiplicity for s in spec) == comb(n, k)


def test_eigenvalues_rejects_rectangular():
    with pytest.raises(ParameterError):
        eigenvalues(SchemeParams(9, 2, 3, 1))


def test_laplacian_kernel_is_one_dimensional():
    # with the shift equal to the degree, 0 is an eigenvalue and the free
    # rank equals the (single) connected component of these graphs
    for n, k, ell in [(5, 1, 0), (8, 2, 0), (8, 2, 1), (9, 3, 0),
                      (9, 3, 1), (9, 3, 2)]:
        p = SchemeParams(n, k, k, ell)
        lam = degree(n, k, ell)
        spec = eigenvalues(p, lam=lam)
        assert spec[0].eigenvalue == 0 and spec[0].multiplicity >= 1
        res = smith_group(p, lam=lam)
        assert res.group.free_rank == 1, (n, k, ell)


def test_e_families_give_same_groups():
    p = SchemeParams(10, 3, 3, 1)
    base = smith_group(p, lam=1)
    for family in ("recursive", "superstandard"):
        assert smith_group(p, lam=1, e_family=family).group == base.group


def _assert_full_conjugation_structure(p, coeffs, lam, family="recursive"):
    # materialize T = blockdiag(E) P^{-1} L P blockdiag(E^{-1}) and check
    # every copy of every M_s sits in its predicted slot with zeros elsewhere
    from setsmith.exact import unimodular_inverse
    n, k = p.n, p.kr
    big_l = scheme_element_matrix(p, coeffs, lam)
    p_mat = bier_p(n, k)
    es = e_matrices(n, k, family)
    size = comb(n, k)
    mus = [mu(n, j) for j in range(k + 1)]
    offs = [sum(mus[:j]) for j in range(k + 1)]

    def block_diag(mats):
        out = IntMatrix.zeros(size, size)
        pos = 0
        for m in mats:
            for r in range(m.rows):
                out.data[pos + r][pos:pos + m.cols] = m.data[r]
            pos += m.rows
        return out

    bd = block_diag(es)
    bd_inv = block_diag([unimodular_inverse(e) for e in es])
    t = bd @ unimodular_inverse(p_mat) @ big_l @ p_mat @ bd_inv

    ms = ms_matrices(p, coeffs, lam)
    # section of a position inside a block: the largest s with mu_{s-1} <= u
    def section(u):
        s = 0
        while s + 1 <= k and mu(n, s) <= u:
            s += 1
        return s

    for i in range(k + 1):
        for j in range(k + 1):
            for u in range(mus[i]):
                su = section(u)
                row = t.data[offs[i] + u]
                for v in range(mus[j]):
                    want = 0
                    if u == v and i >= su and j >= su:
                        want = ms[su].entries.data[i - su][j - su]
                    assert row[offs[j] + v] == want, (i, j, u, v)


def test_full_conjugation_embeds_the_blocks():
    _assert_full_conjugation_structure(SchemeParams(7, 2, 2, 1), (0, 1, 0),
                                       degree(7, 2, 1))
    _assert_full_conjugation_structure(SchemeParams(9, 3, 3, 3), (1, -2, 3, 1), 4)
    # the conjecturally unimodular family produces the very same embedding
    _assert_full_conjugation_structure(SchemeParams(8, 2, 2, 0), (2, 0, -1),
                                       -3, family="superstandard")
    _assert_full_conjugation_structure(SchemeParams(10, 3, 3, 2), None,
                                       degree(10, 3, 2), family="superstandard")


def test_concurrent_callers_share_the_e_cache():
    import threading
    from setsmith.scheme import _E_CACHE
    _E_CACHE.clear()
    results = []
    lock = threading.Lock()

    def work():
        fam = e_matrices(12, 4)
        res = smith_group(SchemeParams(12, 3, 3, 1), lam=3)
        with lock:
            results.append(([m.data for m in fam], res.group))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(results) == 8
    assert all(r == results[0] for r in results[1:])


def test_scheme_element_matrix_against_definition():
    p = SchemeParams(7, 2, 2, 1)
    coeffs = (2, -1, 3)
    lam = 4
    m = scheme_element_matrix(p, coeffs, lam)
    subs = list(m.row_labels)
    for i, a in enumerate(subs):
        for j, b in enumerate(subs):
            want = coeffs[len(set(a) & set(b))] - (lam if i == j else 0)
            assert m.data[i][j] == want
