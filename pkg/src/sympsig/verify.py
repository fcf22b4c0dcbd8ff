"""Verification suites behind ``sympsig verify``.

Each check yields one ``CheckResult``; its line form is
``PASS|FAIL|SKIP <check> g=<g> <details>``.  Resource caps produce SKIP, never
FAIL.  Output depends only on the arguments (no timings, seeded sampling).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .gf2 import (
    BitMatrixF2,
    MODULE_NAMES,
    OrthVector,
    SpLieElementF2,
    adjoint_action,
    b_form,
    b_Z,
    coinvariants_dimension,
    in_Y,
    lambda2_composite_value,
    module_spec,
    project_to_Z,
    q_form,
    q_Z,
    sp_to_orth,
    y_basis,
)
from .groups import (
    ClosureOverflow,
    abelianization,
    center_indices,
    complement_exists_g1,
    conjugation_matches_orthogonal_action,
    contains_minus_identity,
    derived_subgroup,
    enumerate_H,
    enumerate_psp_mod4,
    enumerate_sp_f2,
    enumerate_sp_mod4,
    exceptional_isomorphism_report,
    is_normal_subgroup,
    kernel_is_elementary_abelian,
    nonsplit_involution_check,
    element_orders,
    projective_image_matches_H,
    sp_order,
    unitary_closure_E,
    unitary_closure_Htilde,
)
from .sampling import (
    DEFAULT_SEED,
    random_k_member,
    random_gamma2_not_k,
    random_mixed,
    random_remark3_monodromy,
    random_symplectic,
    random_theta_monodromy,
    random_word,
    rng_from,
    conjugate_monodromy,
    rotate_handles,
    trivial_monodromy,
)
from .symplectic import decompose, evaluate_word, k_member, sp_generators_f2
from .theta import InvariantViolation, kernel_check, sigma, sigma_lift, sigma_UB, signature_mod8

SUITES = ("forms", "iso", "coinv", "groups", "rep")

# hard caps on g per suite
CAPS = {
    "forms.polarization": 3,
    "forms.radical": 3,
    "forms.compat": 3,
    "forms.invariance": 4,
    "forms.vanish_on_Y": 4,
    "forms.lambda2_composite": 6,
    "iso.exceptional": 2,
    "iso.homomorphism": 4,
    "coinv": 5,
    "groups.sp_f2": 3,
    "groups.sp_f2.H1": 2,
    "groups.sp_mod4": 2,
    "groups.psp_mod4": 2,
    "groups.H": 2,
    "groups.E": 3,
    "groups.Htilde": 1,
    "rep": 3,
}

# H_1 values for g = 1, 2 (tables of small-rank values)
H1_TABLE = {
    ("Sp(2g,2)", 1): [2],
    ("Sp(2g,2)", 2): [2],
    ("Sp(2g,Z/4)", 1): [4],
    ("Sp(2g,Z/4)", 2): [2],
    ("PSp(2g,Z/4)", 1): [2],
    ("PSp(2g,Z/4)", 2): [2],
    ("H", 1): [4],
    ("H", 2): [2],
}


@dataclass(frozen=True)
class CheckResult:
    status: str
    check: str
    g: int
    details: str = ""

    @property
    def line(self) -> str:
        return f"{self.status} {self.check} g={self.g} {self.details}".rstrip()

    def as_dict(self) -> dict:
        return {"status": self.status, "check": self.check, "g": self.g, "details": self.details}


def _result(ok: bool, check: str, g: int, details: str = "") -> CheckResult:
    return CheckResult("PASS" if ok else "FAIL", check, g, details)


def _skip(check: str, g: int, why: str) -> CheckResult:
    return CheckResult("SKIP", check, g, why)


def _capped(check: str, g: int) -> CheckResult | None:
    parts = check.split(".")
    cap = next((CAPS[k] for k in (".".join(parts[:i]) for i in range(len(parts), 0, -1)) if k in CAPS), None)
    if cap is not None and g > cap:
        return _skip(check, g, f"cap g<={cap}")
    return None


def _guard(check: str, g: int, fn: Callable[[], CheckResult]) -> CheckResult:
    skipped = _capped(check, g)
    if skipped:
        return skipped
    try:
        return fn()
    except ClosureOverflow as exc:
        return _skip(check, g, f"element cap {exc.bound} exceeded")


# -- helpers ------------------------------------------------------------------------


def _all_orth(g: int) -> list[OrthVector]:
    n = 2 * g + 1
    return [OrthVector.from_vector(g, [(v >> j) & 1 for j in range(n)]) for v in range(1 << n)]


def _sp_basis(g: int) -> list[SpLieElementF2]:
    n = g * (2 * g + 1)
    return [SpLieElementF2.from_coordinates(g, np.eye(n, dtype=np.uint8)[i]) for i in range(n)]


def _random_lie(g: int, rng: np.random.Generator) -> SpLieElementF2:
    return SpLieElementF2.from_coordinates(g, rng.integers(2, size=g * (2 * g + 1)))


def random_sp_f2(g: int, rng: np.random.Generator, length: int = 24) -> BitMatrixF2:
    gens = sp_generators_f2(g)
    out = BitMatrixF2.identity(2 * g)
    for j in rng.integers(len(gens), size=length):
        out = out @ gens[int(j)]
    return out


# -- forms ----------------------------------------------------------------------------


def suite_forms(g_max: int, seed: int, samples: int) -> Iterator[CheckResult]:
    rng = rng_from(seed)
    for g in range(1, g_max + 1):
        yield _guard("forms.polarization", g, lambda: _polarization(g))
        yield _guard("forms.radical", g, lambda: _radical(g))
        yield _guard("forms.compat", g, lambda: _compat(g))
        yield _guard("forms.invariance", g, lambda: _invariance(g, rng, samples))
        yield _guard("forms.vanish_on_Y", g, lambda: _vanish_on_Y(g))
    for g in range(2, g_max + 1):
        yield _guard(
            "forms.lambda2_composite",
            g,
            lambda: _result(lambda2_composite_value(g) == g % 2, "forms.lambda2_composite", g, f"value={lambda2_composite_value(g)}"),
        )


def _polarization(g: int) -> CheckResult:
    vecs = _all_orth(g)
    q = [q_Z(z) for z in vecs]
    bad = 0
    for i, x in enumerate(vecs):
        for j, y in enumerate(vecs):
            if q[i ^ j] != (q[i] + q[j] + b_Z(x, y)) % 2:
                bad += 1
    return _result(bad == 0, "forms.polarization", g, f"pairs={len(vecs) ** 2} failures={bad}")


def _radical(g: int) -> CheckResult:
    vecs = _all_orth(g)
    radical = [i for i, z in enumerate(vecs) if all(b_Z(z, w) == 0 for w in vecs)]
    t = 1 << (2 * g)
    ok = radical == [0, t] and q_Z(vecs[t]) == 1
    return _result(ok, "forms.radical", g, f"radical_size={len(radical)} q(radical)={q_Z(vecs[t])}")


def _compat(g: int) -> CheckResult:
    basis = _sp_basis(g)
    bad = 0
    for Y in basis:
        bad += q_form(Y) != q_Z(project_to_Z(Y))
    for Y1, Y2 in itertools.product(basis, repeat=2):
        S = Y1 + Y2
        bad += q_form(S) != q_Z(project_to_Z(S))
        bad += b_form(Y1, Y2) != b_Z(project_to_Z(Y1), project_to_Z(Y2))
        bad += q_form(S) != (q_form(Y1) + q_form(Y2) + b_form(Y1, Y2)) % 2
    return _result(bad == 0, "forms.compat", g, f"basis={len(basis)} failures={bad}")


def _invariance(g: int, rng: np.random.Generator, samples: int) -> CheckResult:
    bad = 0
    for _ in range(samples):
        X = random_sp_f2(g, rng)
        Y1, Y2 = _random_lie(g, rng), _random_lie(g, rng)
        Z1, Z2 = adjoint_action(X, Y1), adjoint_action(X, Y2)
        bad += q_form(Z1) != q_form(Y1)
        bad += b_form(Z1, Z2) != b_form(Y1, Y2)
    return _result(bad == 0, "forms.invariance", g, f"samples={samples} failures={bad}")


def _vanish_on_Y(g: int) -> CheckResult:
    basis = y_basis(g)
    bad = sum(not in_Y(Y) or q_form(Y) != 0 for Y in basis)
    bad += sum(b_form(Y, Y2) != 0 for Y in basis for Y2 in _sp_basis(g))
    return _result(bad == 0, "forms.vanish_on_Y", g, f"dim_Y={len(basis)} failures={bad}")


# -- iso ------------------------------------------------------------------------------


def suite_iso(g_max: int, seed: int, samples: int) -> Iterator[CheckResult]:
    rng = rng_from(seed)
    for g in range(1, g_max + 1):
        yield _guard("iso.exceptional", g, lambda: _exceptional(g))
        yield _guard("iso.homomorphism", g, lambda: _orth_hom(g, rng, samples))


def _exceptional(g: int) -> CheckResult:
    r = exceptional_isomorphism_report(g)
    details = (
        f"sp={r.sp_order} image={r.image_order} stabilizer={r.stabilizer_order} "
        f"injective={r.injective} preserves_q={r.preserves_form}"
    )
    return _result(r.ok, "iso.exceptional", g, details)


def _orth_hom(g: int, rng: np.random.Generator, samples: int) -> CheckResult:
    bad = 0
    ident = sp_to_orth(BitMatrixF2.identity(2 * g), g) == BitMatrixF2.identity(2 * g + 1)
    for _ in range(samples):
        X, Y = random_sp_f2(g, rng), random_sp_f2(g, rng)
        bad += sp_to_orth(X @ Y, g) != sp_to_orth(X, g) @ sp_to_orth(Y, g)
    return _result(ident and bad == 0, "iso.homomorphism", g, f"samples={samples} failures={bad}")


# -- coinv ----------------------------------------------------------------------------


def expected_coinvariants(name: str, g: int) -> int:
    if name == "Lambda2U":
        return 1  # the symplectic form gives a surjection onto the trivial module
    if name in ("Z", "spLie") and g == 1:
        return 1
    return 0


def suite_coinv(g_max: int, seed: int, samples: int) -> Iterator[CheckResult]:
    for g in range(1, g_max + 1):
        for name in MODULE_NAMES:
            check = f"coinv.{name}"

            def run(name=name, g=g, check=check) -> CheckResult:
                dim = coinvariants_dimension(module_spec(name, g))
                want = expected_coinvariants(name, g)
                return _result(dim == want, check, g, f"dim={dim} expected={want}")

            yield _guard(check, g, run)


# -- groups ---------------------------------------------------------------------------


def suite_groups(g_max: int, seed: int, samples: int) -> Iterator[CheckResult]:
    for g in range(1, g_max + 1):
        yield from _groups_for(g, seed)


def _h1(check: str, g: int, table_key: str, enumerate_fn) -> CheckResult:
    T = enumerate_fn(g)
    got = abelianization(T)
    want = H1_TABLE.get((table_key, g))
    if want is None:
        return _skip(check, g, f"H1={got} no table value")
    return _result(got == want, check, g, f"order={T.order} H1={got} expected={want}")


def _groups_for(g: int, seed: int) -> Iterator[CheckResult]:
    def sp_f2() -> CheckResult:
        T = enumerate_sp_f2(g)
        return _result(T.order == sp_order(g), "groups.sp_f2.order", g, f"order={T.order} expected={sp_order(g)}")

    yield _guard("groups.sp_f2.order", g, sp_f2)
    yield _guard("groups.sp_f2.H1", g, lambda: _h1("groups.sp_f2.H1", g, "Sp(2g,2)", enumerate_sp_f2))

    def sp_mod4() -> CheckResult:
        T = enumerate_sp_mod4(g)
        want = 2 ** (g * (2 * g + 1)) * sp_order(g)
        return _result(T.order == want, "groups.sp_mod4.order", g, f"order={T.order} expected={want}")

    yield _guard("groups.sp_mod4.order", g, sp_mod4)
    yield _guard("groups.sp_mod4.H1", g, lambda: _h1("groups.sp_mod4.H1", g, "Sp(2g,Z/4)", enumerate_sp_mod4))
    yield _guard("groups.psp_mod4.H1", g, lambda: _h1("groups.psp_mod4.H1", g, "PSp(2g,Z/4)", enumerate_psp_mod4))

    if g <= CAPS["groups.H"]:
        H = enumerate_H(g)
        want = 2 ** (2 * g + 1) * sp_order(g)
        yield _result(H.order == want, "groups.H.order", g, f"order={H.order} expected={want}")
        got = abelianization(H)
        yield _result(got == H1_TABLE[("H", g)], "groups.H.H1", g, f"H1={got} expected={H1_TABLE[('H', g)]}")
        size, elementary = kernel_is_elementary_abelian(H)
        yield _result(
            size == 2 ** (2 * g + 1) and elementary, "groups.H.kernel", g, f"order={size} elementary_abelian={elementary}"
        )
        step = max(1, H.order // 64)
        ok = conjugation_matches_orthogonal_action(H, range(0, H.order, step))
        yield _result(ok, "groups.H.kernel_action", g, "conjugation matches sp_to_orth")
        ok = nonsplit_involution_check(g, table=H)
        yield _result(ok, "groups.H.nonsplit_involution", g, "no order-2 lift of v1<->w1")
        if g == 1:
            found = complement_exists_g1()
            yield _result(not found, "groups.H.no_complement", g, f"complement_found={found}")
    else:
        for name in ("order", "H1", "kernel", "kernel_action", "nonsplit_involution"):
            yield _skip(f"groups.H.{name}", g, f"cap g<={CAPS['groups.H']}")

    if g <= CAPS["groups.E"]:
        E = unitary_closure_E(g)
        want = 2 ** (2 * g + 2)
        yield _result(E.order == want, "groups.E.order", g, f"order={E.order} expected={want}")
        center = center_indices(E)
        orders = element_orders(E, center)
        cyclic4 = len(center) == 4 and max(orders) == 4
        yield _result(cyclic4, "groups.E.center", g, f"order={len(center)} cyclic={cyclic4}")
        D = derived_subgroup(E)
        yield _result(D.order == 2, "groups.E.commutator", g, f"order={D.order}")
    else:
        for name in ("order", "center", "commutator"):
            yield _skip(f"groups.E.{name}", g, f"cap g<={CAPS['groups.E']}")

    if g <= CAPS["groups.Htilde"]:
        Ht = unitary_closure_Htilde(g)
        want = 2 * 2 ** (2 * g + 1) * sp_order(g)
        yield _result(Ht.order == want, "groups.Htilde.order", g, f"order={Ht.order} expected={want}")
        yield _result(contains_minus_identity(Ht), "groups.Htilde.minus_identity", g, "-I in closure")
        yield _result(is_normal_subgroup(Ht, unitary_closure_E(g)), "groups.Htilde.E_normal", g, "E normal")
        yield _result(projective_image_matches_H(g), "groups.Htilde.projects_to_H", g, "U/{+-I} matches H")
    else:
        for name in ("order", "minus_identity", "E_normal", "projects_to_H"):
            yield _skip(f"groups.Htilde.{name}", g, f"cap g<={CAPS['groups.Htilde']}")


# -- rep ------------------------------------------------------------------------------


def suite_rep(g_max: int, seed: int, samples: int) -> Iterator[CheckResult]:
    for g in range(1, g_max + 1):
        if _capped("rep", g):
            yield _skip("rep", g, f"cap g<={CAPS['rep']}")
            continue
        rng = rng_from(np.random.default_rng([seed, g]))
        yield from _rep_for(g, rng, samples)


def _rep_for(g: int, rng: np.random.Generator, samples: int) -> Iterator[CheckResult]:
    roundtrip_bad = unitary_bad = hom_bad = 0
    for _ in range(samples):
        w = random_word(g, int(rng.integers(1, 12)), rng)
        X = evaluate_word(w)
        roundtrip_bad += evaluate_word(decompose(X)) != X
        Y = random_symplectic(g, rng, int(rng.integers(1, 8)))
        U, V, W = sigma_lift(X), sigma_lift(Y), sigma_lift(X @ Y)
        unitary_bad += not (U.is_unitary() and V.is_unitary() and W.is_unitary())
        hom_bad += sigma(X @ Y) != sigma(X) @ sigma(Y)
    yield _result(roundtrip_bad == 0, "rep.roundtrip", g, f"samples={samples} failures={roundtrip_bad}")
    yield _result(unitary_bad == 0, "rep.unitarity", g, f"samples={samples} failures={unitary_bad}")
    yield _result(hom_bad == 0, "rep.homomorphism", g, f"samples={samples} failures={hom_bad}")

    n_kernel = max(samples, 500)
    kernel_bad = 0
    members = 0
    for i in range(n_kernel):
        kind = i % 3
        if kind == 0:
            X = random_k_member(g, rng)
        elif kind == 1:
            X = random_gamma2_not_k(g, rng)
        else:
            X = random_mixed(g, rng)
        member = k_member(X)
        members += member
        kernel_bad += kernel_check(X) != member
    yield _result(kernel_bad == 0, "rep.kernel", g, f"samples={n_kernel} members={members} failures={kernel_bad}")

    ub_bad = 0
    for _ in range(samples):
        m = rng.integers(-3, 4, size=(g, g))
        B = np.triu(m) + np.triu(m, 1).T
        s = rng.integers(-2, 3, size=(g, g))
        S = np.triu(s, 1) + np.triu(s, 1).T
        Bp = B + 4 * np.diag(rng.integers(-2, 3, size=g)) + 2 * S
        ub_bad += sigma_UB(B) != sigma_UB(Bp)
    yield _result(ub_bad == 0, "rep.ub_invariance", g, f"samples={samples} failures={ub_bad}")

    yield from _signature_checks(g, rng, max(50, samples // 4))


def _signature_checks(g: int, rng: np.random.Generator, n: int) -> Iterator[CheckResult]:
    ok = all(signature_mod8(trivial_monodromy(g, h)) == 0 for h in (1, 2, 3))
    yield _result(ok, "rep.signature_trivial", g, "h=1..3")
    for name, build in (("theta", random_theta_monodromy), ("remark3", random_remark3_monodromy)):
        values = []
        violations = 0
        invariant_bad = 0
        for _ in range(n):
            M = build(g, rng)
            try:
                s = signature_mod8(M)
            except InvariantViolation:
                violations += 1
                continue
            values.append(s)
            P = random_symplectic(g, rng, 4)
            try:
                moved = (signature_mod8(rotate_handles(M, 1)), signature_mod8(conjugate_monodromy(M, P)))
            except InvariantViolation:
                violations += 1
                continue
            invariant_bad += moved != (s, s)
        nonzero = sum(v != 0 for v in values)
        yield _result(
            violations == 0 and nonzero == 0,
            f"rep.signature_{name}",
            g,
            f"samples={n} nonzero={nonzero} violations={violations}",
        )
        yield _result(invariant_bad == 0, f"rep.signature_{name}_invariance", g, f"failures={invariant_bad}")


SUITE_FUNCS = {
    "forms": suite_forms,
    "iso": suite_iso,
    "coinv": suite_coinv,
    "groups": suite_groups,
    "rep": suite_rep,
}


def run_suite(suite: str = "all", g_max: int = 2, seed: int | None = None, samples: int = 200) -> Iterator[CheckResult]:
    if g_max < 1:
        raise ValueError("g-max must be at least 1")
    seed = DEFAULT_SEED if seed is None else seed
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITE_FUNCS:
            raise ValueError(f"unknown suite {name!r}")
        yield from SUITE_FUNCS[name](g_max, seed, samples)
