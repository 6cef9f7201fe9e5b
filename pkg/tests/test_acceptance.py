"""Acceptance suite: one test per criterion, all at zero tolerance.

Every check is exact rational; a criterion passes only if every single case
agrees bit for bit. Each test prints a PASS/FAIL line (visible under
``pytest -s``).
"""

import json
from fractions import Fraction

from corpoly.exactnum import RationalMatrix, check_dnn
from corpoly.generators import cut_generator, cut_representatives, generator_matrix
from corpoly.hulls import FAMILIES, HullSpec, decide_membership, decide_scaled_cor, screen_failures
from corpoly.ranks import rank_decision, rank_minimum, relaxed_rank, relaxed_rank_decision
from corpoly.reductions import (
    FCCInstance,
    X3CInstance,
    cor_to_cut,
    cut_to_cor,
    fcc_to_relaxed_rank_instance,
    lift_cor_to_conx,
    parse_threshold,
    solve_fcc,
    solve_x3c,
    x3c_to_rank_instance,
)
from corpoly.structured import (
    DecompositionFailure,
    clique_lp_solve,
    forest_decompose,
    support_clique_family,
)

from builders import (
    all_labeled_graphs,
    all_symmetric_matrices,
    chordal_support_matrix,
    conic_member,
    forest_support_matrix,
    make_rng,
    random_linear_triples,
    symmetric_matrix,
)
from oracles import membership_oracle, rank_oracle, relaxed_rank_oracle
from test_cli import FIXTURES, run_cli


def _report(number, description, check):
    try:
        check()
    except BaseException:
        print(f"criterion {number:2d}: FAIL - {description}")
        raise
    print(f"criterion {number:2d}: PASS - {description}")


def test_criterion_01_lift_equivalence():
    def check():
        rng = make_rng(101)
        members = 0
        while members < 50:
            gamma, _ = conic_member(rng, 3, total=Fraction(1), include_zero=True)
            direct = decide_membership(gamma, "cor")
            lifted = decide_membership(lift_cor_to_conx(gamma), "conx")
            assert direct.member and lifted.member
            members += 1
        non_members = 0
        while non_members < 50:
            gamma = symmetric_matrix(
                rng, 3, (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1)
            )
            direct = decide_membership(gamma, "cor").member
            lifted = decide_membership(lift_cor_to_conx(gamma), "conx").member
            assert direct == lifted
            if not direct:
                non_members += 1

    _report(1, "polytope membership equals cone membership of the bordered lift "
               "(50 members + 50 non-members, 100/100)", check)


def test_criterion_02_exact_cover_equivalence():
    def check():
        # exhaustive corpus for q = 1: every triple family over {1, 2, 3}
        for triples in ((), ((1, 2, 3),)):
            instance = X3CInstance(3, triples)
            reduced = x3c_to_rank_instance(instance)
            result = rank_decision(reduced.matrix, "conx", reduced.threshold)
            got = result.status == "answered" and bool(result.threshold_met)
            assert got == solve_x3c(instance), triples
            if got:
                assert result.certificate.recompose() == reduced.matrix
        # random linear corpus for q = 2
        rng = make_rng(102)
        for trial in range(200):
            keep = rng.choice((0.4, 0.7, 1.0))
            instance = X3CInstance(6, random_linear_triples(rng, 2, keep))
            reduced = x3c_to_rank_instance(instance)
            result = rank_decision(reduced.matrix, "conx", reduced.threshold)
            got = result.status == "answered" and bool(result.threshold_met)
            assert got == solve_x3c(instance), instance.triples
            if got:
                assert result.certificate.recompose() == reduced.matrix
                assert result.certificate.support_size() <= reduced.threshold

    _report(2, "exact-cover answers equal rank decisions on the reduced matrices "
               "(exhaustive q=1 plus 200 random linear q=2 instances)", check)


def test_criterion_03_scaling_and_relaxed_threshold():
    def check():
        rng = make_rng(103)
        for trial in range(100):
            n = rng.randint(1, 4)
            rho = Fraction(rng.randint(1, 6), rng.randint(1, 4))
            built_within = trial % 2 == 0
            if built_within:
                sigma = rho * Fraction(rng.randint(1, 4), 4)  # 0 < sigma <= rho
                gamma, _ = conic_member(rng, n, total=sigma, include_zero=True)
            else:
                gamma = symmetric_matrix(rng, n, (0, Fraction(1, 2), 1, 2))
            direct = decide_scaled_cor(gamma, rho).member
            rescaled = decide_membership(gamma.scale(Fraction(1) / rho), "cor").member
            assert direct == rescaled
            if built_within:
                decision = relaxed_rank_decision(gamma, rho)
                assert decision.status == "answered" and decision.threshold_met

    _report(3, "scaled-polytope membership matches membership of gamma/rho, and "
               "sigma-combinations pass the relaxed-rank threshold (100 pairs)", check)


def test_criterion_04_clique_cover_equivalence():
    def check():
        quarter = Fraction(1, 4)
        graphs = []
        for v in (1, 2, 3, 4):
            graphs.extend((v, edges) for edges in all_labeled_graphs(v))
        assert len([g for g in graphs if g[0] == 4]) == 64
        for v, edges in graphs:
            _, optimum = solve_fcc(FCCInstance(v, edges, Fraction(1)))
            for budget in (optimum - quarter, optimum, optimum + quarter):
                instance = FCCInstance(v, edges, budget)
                reduced = fcc_to_relaxed_rank_instance(instance)
                expected, _ = solve_fcc(instance)
                decision = relaxed_rank_decision(reduced.matrix, reduced.threshold)
                got = decision.status == "answered" and bool(decision.threshold_met)
                assert got == expected, (v, edges, budget)
        reduced = fcc_to_relaxed_rank_instance(FCCInstance(1, (), Fraction(1)))
        assert reduced.matrix == RationalMatrix(
            [[Fraction(1, 2), Fraction(1, 4)], [Fraction(1, 4), Fraction(1, 4)]]
        )
        assert reduced.threshold == Fraction(7, 4)

    _report(4, "fractional clique cover answers equal relaxed-rank decisions on "
               "the reduced instances (all graphs on <= 4 vertices, three budgets "
               "each; the single-vertex matrix is bit-exact)", check)


def test_criterion_05_cut_isomorphism():
    def check():
        for n in (1, 2, 3):
            for k in range(1 << n):
                x = generator_matrix(k, n)
                assert cut_to_cor(cor_to_cut(x)) == x
        rng = make_rng(105)
        for _ in range(50):
            n = rng.randint(1, 3)
            gamma, _ = conic_member(rng, n, total=Fraction(1), include_zero=True)
            assert cut_to_cor(cor_to_cut(gamma)) == gamma
        image = {cor_to_cut(generator_matrix(k, 2)) for k in range(4)}
        representatives = {cut_generator(k, 3) for k in cut_representatives(3)}
        assert image == representatives

    _report(5, "the sign-matrix isomorphism round-trips exactly (all generators "
               "for n <= 3 plus 50 random combinations) and maps the n=2 "
               "generator set onto the n=3 cut representatives", check)


def test_criterion_06_bruteforce_equivalence():
    def check():
        entries = (0, Fraction(1, 2), 1, 2)
        for n in (1, 2, 3):
            for gamma in all_symmetric_matrices(n, entries):
                for family in ("conx", "cor"):
                    expected_member = membership_oracle(gamma, family)
                    result = decide_membership(gamma, family)
                    assert result.member == expected_member, (gamma, family)
                    if expected_member:
                        assert result.certificate.recompose() == gamma
                        minimum = rank_minimum(gamma, family)
                        assert minimum.rank == rank_oracle(gamma, family), (gamma, family)
                    else:
                        assert rank_minimum(gamma, family).status == "not-member"
                expected_value = relaxed_rank_oracle(gamma)
                relaxed = relaxed_rank(gamma)
                if expected_value is None:
                    assert relaxed.status == "not-member"
                else:
                    assert relaxed.value == expected_value
                    assert relaxed.certificate.total() == expected_value

    _report(6, "membership, minimum rank, and relaxed rank agree with brute force "
               "over the full unpruned generator set (exhaustive entries in "
               "{0, 1/2, 1, 2}, n <= 3)", check)


_SCREEN_FAILING = [
    RationalMatrix([[1, 2], [3, 1]]),    # asymmetric
    RationalMatrix([[2, -1], [-1, 2]]),  # negative entry (boolean families)
    RationalMatrix([[0, 1], [1, 0]]),    # not PSD
    RationalMatrix([[1, 2], [2, 1]]),    # outside [-1, 1] (cut families)
    RationalMatrix([[2, 0], [0, 2]]),    # diagonal not 1 (cut families)
]


def test_criterion_07_screen_soundness():
    def check():
        rng = make_rng(107)
        for _ in range(500):
            n = rng.randint(1, 6)
            gamma, _ = conic_member(rng, n, max_terms=min(8, (1 << n) - 1))
            assert check_dnn(gamma).dnn
        # no decider says YES where its screen fails
        for gamma in _SCREEN_FAILING:
            for family in FAMILIES:
                if not screen_failures(gamma, family):
                    continue
                spec = HullSpec(family, Fraction(2) if family == "rho-cor" else None)
                result = decide_membership(gamma, spec)
                assert not result.member
                assert result.rejection == "failed-screen"
        # screens are sound necessary conditions: whenever a boolean-family
        # screen fires, the unpruned LP is infeasible too
        for _ in range(60):
            n = rng.randint(1, 3)
            gamma = symmetric_matrix(rng, n, (-1, 0, Fraction(1, 2), 1))
            if screen_failures(gamma, "conx") and gamma.is_symmetric():
                if all(v >= 0 for row in gamma.rows() for v in row):
                    assert not membership_oracle(gamma, "conx")

    _report(7, "500 random conic combinations are all doubly nonnegative, and no "
               "decider answers YES on a matrix failing its family screen", check)


def test_criterion_08_structured_agreement():
    def check():
        rng = make_rng(108)
        done = 0
        while done < 100:
            gamma = forest_support_matrix(rng, rng.randint(2, 5), done % 2 == 0)
            if gamma is None:
                continue
            general = decide_membership(gamma, "conx")
            special = forest_decompose(gamma)
            if isinstance(special, DecompositionFailure):
                assert not general.member
            else:
                assert general.member
                assert special.to_certificate().recompose() == gamma
                assert general.certificate.recompose() == gamma
            done += 1
        for trial in range(100):
            gamma = chordal_support_matrix(rng, rng.randint(2, 5), trial % 2 == 0)
            family = support_clique_family(gamma)
            special = clique_lp_solve(gamma, family, "membership")
            general = decide_membership(gamma, "conx")
            assert special.member == general.member
            if special.member:
                assert special.certificate.recompose() == gamma
                assert general.certificate.recompose() == gamma
            special_relaxed = clique_lp_solve(gamma, family, "relaxed-rank")
            general_relaxed = relaxed_rank(gamma)
            answered = general_relaxed.status == "answered"
            assert (special_relaxed.status == "answered") == answered
            if answered:
                assert special_relaxed.value == general_relaxed.value
                assert special_relaxed.certificate.recompose() == gamma

    _report(8, "forest and chordal-clique solvers answer exactly like the general "
               "deciders on 100 + 100 random structured matrices, with exact "
               "certificate recomposition", check)


def test_criterion_09_certificate_sparsity():
    def check():
        rng = make_rng(109)
        for _ in range(60):
            n = rng.randint(2, 5)
            bound = n * (n + 1) // 2
            gamma, _ = conic_member(rng, n, max_terms=(1 << n) - 1)
            result = decide_membership(gamma, "conx")
            assert result.member
            assert result.certificate.support_size() <= bound
            relaxed = relaxed_rank(gamma)
            assert relaxed.certificate.support_size() <= bound

            total = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            scaled, _ = conic_member(rng, n, total=total, include_zero=True)
            result = decide_scaled_cor(scaled, total)
            assert result.member
            assert result.certificate.support_size() <= bound + 1
            polytope, _ = conic_member(rng, n, total=Fraction(1), include_zero=True)
            result = decide_membership(polytope, "cor")
            assert result.member
            assert result.certificate.support_size() <= bound + 1

    _report(9, "every cone certificate has at most n(n+1)/2 positive weights and "
               "every polytope certificate at most one more", check)


def test_criterion_10_cli_pipeline(tmp_path):
    def check():
        def pipeline(workdir):
            workdir.mkdir()
            records = {}
            mat = workdir / "tiny.mat"
            reduce_x3c = run_cli("reduce", "--from", "x3c",
                                 "--in", str(FIXTURES / "tiny.x3c"), "--out", str(mat))
            assert reduce_x3c.returncode == 0
            records["tiny.mat"] = mat.read_bytes()
            threshold = parse_threshold((workdir / "tiny.mat.threshold").read_text())
            cert = workdir / "tiny.cert.json"
            solve = run_cli("rank", "--set", "conx", "--matrix", str(mat),
                            "--threshold", str(threshold), "--certificate", str(cert))
            assert solve.returncode == 0
            records["tiny.cert.json"] = cert.read_bytes()
            verify = run_cli("verify", "--matrix", str(mat), "--certificate", str(cert))
            assert verify.returncode == 0

            fmat = workdir / "k1.mat"
            reduce_fcc = run_cli("reduce", "--from", "fcc",
                                 "--in", str(FIXTURES / "k1.fcc"), "--out", str(fmat))
            assert reduce_fcc.returncode == 0
            assert fmat.read_text() == "2\n1/2 1/4\n1/4 1/4\n"
            fthreshold = parse_threshold((workdir / "k1.mat.threshold").read_text())
            assert fthreshold == Fraction(7, 4)
            fcert = workdir / "k1.cert.json"
            fsolve = run_cli("relaxed-rank", "--matrix", str(fmat),
                             "--threshold", str(fthreshold), "--certificate", str(fcert))
            assert fsolve.returncode == 0
            records["k1.cert.json"] = fcert.read_bytes()
            fverify = run_cli("verify", "--matrix", str(fmat), "--certificate", str(fcert))
            assert fverify.returncode == 0

            no = run_cli("membership", "--set", "cor", "--matrix", str(FIXTURES / "id2.mat"))
            assert no.returncode == 1
            promise = run_cli("rank", "--set", "conx",
                              "--matrix", str(FIXTURES / "notdnn.mat"))
            assert promise.returncode == 3
            usage = run_cli("membership", "--set", "rho-cor",
                            "--matrix", str(FIXTURES / "ones2.mat"))
            assert usage.returncode == 2
            return records

        first = pipeline(tmp_path / "run1")
        second = pipeline(tmp_path / "run2")
        assert first == second
        document = json.loads(first["tiny.cert.json"].decode())
        assert document["answer"] == "yes"

    _report(10, "the reduce-solve-verify pipeline reproduces the documented exit "
                "codes and byte-identical documents across two runs", check)
