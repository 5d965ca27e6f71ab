import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covercraft.covering import (
    UNATTAINABLE,
    BudgetExhausted,
    CosetSystem,
    SearchBudget,
    audit,
    blocking_number,
    check_fedthm,
    min_trivial_intersection_cover,
    phi,
    punctured_cover_construct,
    punctured_target,
    translation_invariant,
    verify_coset_index_bound,
    verify_fedthm,
)
from covercraft.groups import (
    Coset,
    abelian_groups_up_to,
    enumerate_subgroups,
    parse_group,
    subgroup_generated,
    tau_of,
    trivial_subgroup,
    whole_group,
)

import oracles


def coset(g, gens, rep):
    return Coset.make(subgroup_generated(g, gens), rep if isinstance(rep, int) else g.index(rep))


def system_elements(system):
    return [(c.subgroup.elements, c.representative) for c in system]


# audit ----------------------------------------------------------------------

def test_audit_punctured_c6():
    g = parse_group("C6")
    s = CosetSystem(g, (coset(g, [3], 1), coset(g, [3], 2), coset(g, [], 3)))
    rep = audit(s, range(1, 6))
    assert rep.covers_target and rep.irredundant and rep.subgroup_intersection.is_trivial()
    assert rep.uncovered_witness is None


def test_audit_empty_system():
    g = parse_group("C5")
    rep = audit(CosetSystem(g, ()), [0])
    assert not rep.covers_target and rep.uncovered_witness == 0


def test_audit_full_group_member():
    g = parse_group("C2*C3")
    s = CosetSystem(g, (coset(g, [1], 1), Coset.make(whole_group(g), 0), coset(g, [], 4)))
    rep = audit(s, [1, 2, 5])
    assert rep.covers_target
    assert rep.removable_indices == (0, 2)


def test_audit_witness_is_minimal():
    g = parse_group("C8")
    s = CosetSystem(g, (coset(g, [2], 0),))
    assert audit(s).uncovered_witness == 1


# phi ------------------------------------------------------------------------

@pytest.mark.parametrize("spec,value", [("C2", 1), ("C6", 3), ("C2*C2*C3", 4)])
def test_phi_examples(spec, value):
    r = phi(parse_group(spec))
    assert r.status == "exact" and r.value == value
    rep = audit(r.witness, range(1, parse_group(spec).order))
    assert rep.covers_target
    assert not r.witness.union_bits & 1


@pytest.mark.parametrize("g", [g for g in abelian_groups_up_to(8)], ids=str)
def test_phi_matches_bruteforce(g):
    assert phi(g).value == oracles.phi_bruteforce(g.cyclic_orders)


@pytest.mark.parametrize("g", abelian_groups_up_to(16), ids=str)
def test_punctured_construction(g):
    s = punctured_cover_construct(g)
    assert len(s) == tau_of(g.order)
    assert s.union_bits == punctured_target(g)


def test_punctured_construction_examples():
    c4 = parse_group("C4")
    assert system_elements(punctured_cover_construct(c4)) == [([0, 2], 1), ([0], 2)]
    c3 = parse_group("C3")
    assert system_elements(punctured_cover_construct(c3)) == [([0], 1), ([0], 2)]
    k = parse_group("C2*C2")
    s = punctured_cover_construct(k)
    assert len(s) == 2 and s.union_bits == 0b1110


@pytest.mark.parametrize("b,c", [("C2", "C3"), ("C4", "C3"), ("C2*C2", "C3"), ("C3", "C5"), ("C2", "C5"), ("C2", "C7")])
def test_phi_superadditive_on_coprime_products(b, c):
    gb, gc = parse_group(b), parse_group(c)
    prod = parse_group(f"{b}*{c}")
    assert phi(prod).value >= phi(gb).value + phi(gc).value


def test_phi_budget():
    r = phi(parse_group("C2*C2*C2*C2"), SearchBudget(max_cosets=3))
    assert r.status == "inconclusive" and r.value is None
    r = phi(parse_group("C2*C2*C2*C2"), SearchBudget(node_limit=3))
    assert r.status == "inconclusive" and r.nodes_expanded <= 3
    with pytest.raises(BudgetExhausted):
        check_fedthm(parse_group("C2*C2*C2"), SearchBudget(node_limit=5))


# f and g --------------------------------------------------------------------

def test_f_examples():
    r = min_trivial_intersection_cover(parse_group("C2*C2"), "cosets")
    assert r.value == 3
    c4 = parse_group("C4")
    r = min_trivial_intersection_cover(c4, "cosets")
    assert r.value == 3
    # branch order puts {0,2} first; the other witness is its translate by 1
    assert sorted(tuple(c.elements) for c in r.witness) == [(0, 2), (1,), (3,)]
    moved = r.witness.translate(1)
    assert sorted(tuple(c.elements) for c in moved) == [(0,), (1, 3), (2,)]
    rep = audit(moved)
    assert rep.covers_target and rep.irredundant and rep.subgroup_intersection.is_trivial()
    g = min_trivial_intersection_cover(c4, "subgroups")
    assert g.value is UNATTAINABLE and g.status == "unattainable" and g.to_json()["value"] == "unattainable"


@pytest.mark.parametrize("spec", ["C2", "C3", "C4", "C2*C2", "C5", "C6", "C2*C4", "C3*C3", "C8"])
def test_f_g_match_bruteforce(spec):
    g = parse_group(spec)
    f = min_trivial_intersection_cover(g, "cosets")
    assert f.value == oracles.f_bruteforce(g.cyclic_orders)
    sg = min_trivial_intersection_cover(g, "subgroups")
    expect = oracles.f_bruteforce(g.cyclic_orders, subgroup_only=True)
    assert (sg.value is UNATTAINABLE) == (expect is None)
    if expect is not None:
        assert sg.value == expect


@pytest.mark.parametrize("n", [2, 3])
def test_f_elementary_two_groups(n):
    assert min_trivial_intersection_cover(parse_group("*".join(["C2"] * n))).value == n + 1


def test_mode_validation():
    with pytest.raises(ValueError):
        min_trivial_intersection_cover(parse_group("C4"), "points")


@pytest.mark.parametrize("spec", ["C2*C2", "C6", "C8", "C3*C3"])
def test_fedthm(spec):
    assert verify_fedthm(parse_group(spec))


def test_fedthm_report():
    chk = check_fedthm(parse_group("C6"))
    assert chk.bound == 3 and chk.f.value >= 3 and chk.holds


# index bound ----------------------------------------------------------------

def test_index_bound_examples():
    c4 = parse_group("C4")
    s = CosetSystem(c4, (coset(c4, [2], 1), coset(c4, [], 0), coset(c4, [], 2)))
    assert verify_coset_index_bound(s)
    s = CosetSystem(c4, (Coset.make(whole_group(c4), 0),))
    assert verify_coset_index_bound(s)
    e3 = parse_group("C2*C2*C2")
    planes = [coset(e3, [(0, 1, 0), (0, 0, 1)], 0), coset(e3, [(1, 0, 0), (0, 0, 1)], 0),
              coset(e3, [(1, 0, 0), (0, 1, 0)], 0), coset(e3, [], (1, 1, 1))]
    s = CosetSystem(e3, tuple(planes))
    rep = audit(s)
    assert rep.covers_target and rep.irredundant and rep.subgroup_intersection.is_trivial()
    assert verify_coset_index_bound(s)


def test_index_bound_rejects_non_cover():
    c4 = parse_group("C4")
    with pytest.raises(ValueError):
        verify_coset_index_bound(CosetSystem(c4, (coset(c4, [2], 0),)))


# blocking -------------------------------------------------------------------

@pytest.mark.parametrize("n,p,value", [(1, 2, 2), (1, 3, 3), (2, 2, 3), (3, 2, 4), (2, 3, 5)])
def test_blocking(n, p, value):
    r = blocking_number(n, p)
    assert r.status == "exact" and r.value == value == 1 + n * (p - 1)
    assert len(r.points) == value


def test_blocking_rejects_prime_power():
    with pytest.raises(ValueError):
        blocking_number(2, 4)


# properties -----------------------------------------------------------------

GROUPS = [g for g in abelian_groups_up_to(12)]


@st.composite
def systems(draw):
    g = draw(st.sampled_from(GROUPS))
    subs = enumerate_subgroups(g)
    k = draw(st.integers(0, 4))
    cosets = tuple(Coset.make(draw(st.sampled_from(subs)), draw(st.integers(0, g.order - 1))) for _ in range(k))
    target = draw(st.sets(st.integers(0, g.order - 1)))
    t = draw(st.integers(0, g.order - 1))
    return CosetSystem(g, cosets), target, t


@settings(max_examples=200, deadline=None)
@given(systems())
def test_translation_invariance(case):
    system, target, t = case
    assert translation_invariant(system, target, t)
    g = system.group
    moved = audit(system.translate(t), [g.add(x, t) for x in target])
    base = audit(system, target)
    if base.uncovered_witness is not None:
        assert moved.uncovered_witness is not None
        assert not system.union_bits >> g.add(moved.uncovered_witness, g.neg(t)) & 1


@settings(max_examples=100, deadline=None)
@given(systems())
def test_report_consistency(case):
    system, target, _ = case
    rep = audit(system, target)
    assert rep.covers_target == (rep.uncovered_witness is None)
    for i in rep.removable_indices:
        rest = CosetSystem(system.group, system.cosets[:i] + system.cosets[i + 1:])
        assert audit(rest, target).covers_target


@pytest.mark.parametrize("spec", ["C2*C2*C2", "C2*C4", "C3*C3", "C12"])
def test_search_independent_of_workers(spec):
    g = parse_group(spec)
    ref = min_trivial_intersection_cover(g, "cosets", SearchBudget(workers=1)).to_json()
    for w in (2, 4):
        assert min_trivial_intersection_cover(g, "cosets", SearchBudget(workers=w)).to_json() == ref
    ref = phi(g, SearchBudget(workers=1)).to_json()
    assert phi(g, SearchBudget(workers=4)).to_json() == ref


def test_trivial_subgroup_cosets_in_catalogue():
    g = parse_group("C3")
    r = phi(g)
    assert all(c.subgroup == trivial_subgroup(g) for c in r.witness)
