"""Acceptance criteria, one test each.

Every test prints a single ``PASS criterion N ...`` or ``FAIL criterion N ...``
line (visible even without ``-s``) and then asserts the outcome.
"""
import time

import numpy as np
import pytest

from sympsig.gf2 import (
    OrthVector,
    SpLieElementF2,
    b_form,
    b_Z,
    coinvariants_dimension,
    lambda2_composite_value,
    module_spec,
    project_to_Z,
    q_form,
    q_Z,
)
from sympsig.groups import (
    abelianization,
    center_indices,
    derived_subgroup,
    element_orders,
    enumerate_H,
    enumerate_sp_f2,
    enumerate_sp_mod4,
    exceptional_isomorphism_report,
    h_kernel_indices,
    kernel_coordinates,
    kernel_is_elementary_abelian,
    nonsplit_involution_check,
    contains_minus_identity,
    unitary_closure_E,
    unitary_closure_Htilde,
)
from sympsig.sampling import (
    DEFAULT_SEED,
    conjugate_monodromy,
    random_gamma2_not_k,
    random_k_member,
    random_mixed,
    random_remark3_monodromy,
    random_symplectic,
    random_theta_monodromy,
    random_word,
    rotate_handles,
    trivial_monodromy,
)
from sympsig.symplectic import decompose, evaluate_word, k_member
from sympsig.theta import InvariantViolation, kernel_check, sigma, sigma_lift, sigma_UB, signature_mod8


def all_orth(g: int) -> list[OrthVector]:
    n = 2 * g + 1
    return [OrthVector.from_vector(g, [(v >> j) & 1 for j in range(n)]) for v in range(1 << n)]


def lie_basis(g: int) -> list[SpLieElementF2]:
    n = g * (2 * g + 1)
    return [SpLieElementF2.from_coordinates(g, np.eye(n, dtype=np.uint8)[i]) for i in range(n)]


@pytest.fixture
def report(capsys):
    def _report(n, ok: bool, details: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n} {details}")
        assert ok, details

    return _report


def test_criterion_1_orders(report):
    t0 = time.perf_counter()
    got = {
        "Sp(2,2)": enumerate_sp_f2(1).order,
        "Sp(4,2)": enumerate_sp_f2(2).order,
        "H g=1": enumerate_H(1).order,
        "H g=2": enumerate_H(2).order,
        "E g=1": unitary_closure_E(1).order,
        "E g=2": unitary_closure_E(2).order,
        "E g=3": unitary_closure_E(3).order,
        "Htilde g=1": unitary_closure_Htilde(1).order,
    }
    want = {
        "Sp(2,2)": 6,
        "Sp(4,2)": 720,
        "H g=1": 48,
        "H g=2": 23040,
        "E g=1": 16,
        "E g=2": 64,
        "E g=3": 256,
        "Htilde g=1": 96,
    }
    elapsed = time.perf_counter() - t0
    ok = got == want and elapsed < 120
    report(1, ok, f"orders={got} elapsed={elapsed:.1f}s")


def test_criterion_2_tables(report):
    got = {
        "H1(H) g=1": abelianization(enumerate_H(1)),
        "H1(H) g=2": abelianization(enumerate_H(2)),
        "H1(Sp(2,Z/4))": abelianization(enumerate_sp_mod4(1)),
        "H1(Sp(4,2))": abelianization(enumerate_sp_f2(2)),
    }
    want = {"H1(H) g=1": [4], "H1(H) g=2": [2], "H1(Sp(2,Z/4))": [4], "H1(Sp(4,2))": [2]}
    report(2, got == want, f"abelianizations={got}")


def _q_invariant_under_conjugation(g: int, sample) -> bool:
    H = enumerate_H(g)
    op = H.operation
    kernel = h_kernel_indices(H)
    ks = op.take(H.elements, kernel)
    qs = [q_Z(kernel_coordinates(k)) for k in ks]
    for i in sample:
        xs = op.repeat(op.take(H.elements, [int(i)]), len(kernel))
        conj = op.mul(op.mul(xs, ks), op.inverse(xs))
        if [q_Z(kernel_coordinates(c)) for c in conj] != qs:
            return False
    return True


def test_criterion_3_structure(report):
    rng = np.random.default_rng(DEFAULT_SEED)
    parts = {}
    for g in (1, 2):
        order, elem = kernel_is_elementary_abelian(enumerate_H(g))
        parts[f"kernel g={g}"] = order == 2 ** (2 * g + 1) and elem
        n = enumerate_H(g).order
        sample = range(n) if g == 1 else rng.choice(n, size=400, replace=False)
        parts[f"q-invariance g={g}"] = _q_invariant_under_conjugation(g, sample)
        rep = exceptional_isomorphism_report(g)
        parts[f"sp_to_orth g={g}"] = rep.ok and rep.image_order == enumerate_sp_f2(g).order
        parts[f"no order-2 lift g={g}"] = nonsplit_involution_check(g)
    for g in (1, 2, 3):
        E = unitary_closure_E(g)
        center = center_indices(E)
        cyclic4 = len(center) == 4 and 4 in element_orders(E, center)
        parts[f"E center/derived g={g}"] = cyclic4 and derived_subgroup(E).order == 2
    failed = [k for k, v in parts.items() if not v]
    report(3, not failed, f"checks={len(parts)} failed={failed}")


def test_criterion_4_coinvariants(report):
    t0 = time.perf_counter()
    cases = [("Y", g, 0) for g in range(2, 6)]
    cases += [("U", g, 0) for g in range(1, 6)]
    cases += [("Z", g, 0) for g in range(2, 6)]
    cases += [("spLie", g, 0) for g in range(2, 6)]
    cases += [("Z", 1, 1)]
    bad = []
    for name, g, want in cases:
        got = coinvariants_dimension(module_spec(name, g))
        if got != want:
            bad.append((name, g, got, want))
    elapsed = time.perf_counter() - t0
    report(4, not bad and elapsed < 10, f"cases={len(cases)} mismatches={bad} elapsed={elapsed:.2f}s")


def test_criterion_5_representation(report):
    samples = 200
    counts = {"unitarity": 0, "homomorphism": 0, "roundtrip": 0, "kernel": 0, "ub_invariance": 0}
    members = 0
    for g in (1, 2, 3):
        rng = np.random.default_rng([DEFAULT_SEED, 5, g])
        for _ in range(samples):
            X = evaluate_word(random_word(g, int(rng.integers(1, 12)), rng))
            Y = random_symplectic(g, rng, int(rng.integers(1, 8)))
            counts["roundtrip"] += evaluate_word(decompose(X)) != X
            U, V, W = sigma_lift(X), sigma_lift(Y), sigma_lift(X @ Y)
            counts["unitarity"] += not (U.is_unitary() and V.is_unitary() and W.is_unitary())
            counts["homomorphism"] += sigma(X @ Y) != sigma(X) @ sigma(Y)
        for i in range(500):
            X = (random_k_member, random_gamma2_not_k, random_mixed)[i % 3](g, rng)
            member = k_member(X)
            members += member
            counts["kernel"] += kernel_check(X) != member
        for _ in range(samples):
            m = rng.integers(-3, 4, size=(g, g))
            B = np.triu(m) + np.triu(m, 1).T
            s = rng.integers(-2, 3, size=(g, g))
            Bp = B + 4 * np.diag(rng.integers(-2, 3, size=g)) + 2 * (np.triu(s, 1) + np.triu(s, 1).T)
            counts["ub_invariance"] += sigma_UB(B) != sigma_UB(Bp)
    ok = not any(counts.values()) and 0 < members < 1500
    report(5, ok, f"g=1..3 samples={samples} kernel_samples=500 members={members} failures={counts}")


def test_criterion_6_signature(report):
    n = 50
    stats = {"trivial_nonzero": 0, "theta_nonzero": 0, "remark3_nonzero": 0, "invariant_violations": 0, "unstable": 0}
    for g in (1, 2, 3):
        rng = np.random.default_rng([DEFAULT_SEED, 6, g])
        stats["trivial_nonzero"] += sum(signature_mod8(trivial_monodromy(g, h)) != 0 for h in (1, 2, 3))
        for name, build in (("theta", random_theta_monodromy), ("remark3", random_remark3_monodromy)):
            for _ in range(n):
                M = build(g, rng)
                try:
                    s = signature_mod8(M)
                    moved = (
                        signature_mod8(rotate_handles(M, 1)),
                        signature_mod8(conjugate_monodromy(M, random_symplectic(g, rng, 4))),
                    )
                except InvariantViolation:
                    stats["invariant_violations"] += 1
                    continue
                stats[f"{name}_nonzero"] += s != 0
                stats["unstable"] += moved != (s, s)
    report(6, not any(stats.values()), f"g=1..3 per_family={n} {stats}")


def test_criterion_7_forms(report):
    bad = []
    for g in (1, 2, 3):
        zs = all_orth(g)
        for x in zs:
            for y in zs:
                if (q_Z(x + y) - q_Z(x) - q_Z(y) - b_Z(x, y)) % 2:
                    bad.append(("polarization_Z", g))
                    break
        basis = lie_basis(g)
        for Y1 in basis:
            z1 = project_to_Z(Y1)
            if q_form(Y1) != q_Z(z1):
                bad.append(("q_compat", g))
            for Y2 in basis:
                if b_form(Y1, Y2) != b_Z(z1, project_to_Z(Y2)):
                    bad.append(("b_compat", g))
                if (q_form(Y1 + Y2) - q_form(Y1) - q_form(Y2) - b_form(Y1, Y2)) % 2:
                    bad.append(("polarization_lie", g))
    lam = {g: lambda2_composite_value(g) for g in range(2, 7)}
    lam_ok = all(v == g % 2 for g, v in lam.items())
    report(7, not bad and lam_ok, f"g<=3 form_failures={sorted(set(bad))} lambda2={lam}")


def test_nonsplit_witness_minus_identity(report):
    # no input with residue 4 is demanded; -I in the enumerated double cover is the substitute
    ok = contains_minus_identity(unitary_closure_Htilde(1))
    report("7b", ok, "-I lies in the unitary closure of the lifted generators at g=1")
