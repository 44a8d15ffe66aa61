"""Program-size tables, profiles, and machine-to-machine gaps."""

import math
from fractions import Fraction

import pytest

from thermoait.bitstring import BitString, LAMBDA
from thermoait.dyadic import Dyadic
from thermoait.enclosure import Enclosure
from thermoait.ensembles import builtin_snapshot
from thermoait.errors import SpecError
from thermoait.complexity import (
    ABSENT, EXACT, OK, UNRESOLVED, UPPER_BOUND, build_table, invariance_gap,
    profile,
)

LIT = build_table(builtin_snapshot("literal", 21, program_cap=1 << 12))
GAM = build_table(builtin_snapshot("gamma_literal", 17, program_cap=1 << 12))
SDM = build_table(builtin_snapshot("sdm4", 16, program_cap=1 << 12))


# -- table construction ------------------------------------------------

def test_literal_closed_form():
    assert LIT.exactness == EXACT
    for n in range(0, 11):
        for v in range(min(1 << n, 16)):
            x = BitString.from_int(v, n)
            assert LIT.H(x) == 2 * n + 1


def test_gamma_literal_closed_form():
    assert GAM.exactness == EXACT
    for n in range(1, 11):
        x = BitString.from_int(0, n)
        assert GAM.H(x) == n + 2 * int(math.log2(n)) + 1


def test_sdm4_empty_string_via_11():
    assert SDM.H(LAMBDA) == 2
    assert SDM.entries[LAMBDA][1] == BitString("11")
    assert SDM.exactness == EXACT


def test_min_program_outputs_key():
    for s, (h, p) in list(LIT.entries.items())[:32]:
        assert len(p) == h
        rec = next(r for r in LIT.snapshot.programs if r.program == p)
        assert rec.output == s


def test_truncated_snapshot_is_upper_bound():
    t = build_table(builtin_snapshot("sdm4", 16, program_cap=5))
    assert t.exactness == UPPER_BOUND


def test_extension_only_lowers():
    small = build_table(builtin_snapshot("sdm4", 8, program_cap=1 << 12))
    for s, (h, _) in small.entries.items():
        assert SDM.H(s) is not None and SDM.H(s) <= h


# -- profiles ----------------------------------------------------------

def test_profile_worked_example():
    # alpha = 5/8: sixth prefix is 101000, gamma cost 6 + 2*2 + 1 = 11
    prof = profile(Dyadic(5, -3), 6, GAM)
    last = prof[-1]
    assert last.bits == BitString("101000")
    assert last.H == 11 and last.ratio == Fraction(11, 6)
    assert all(e.status == OK for e in prof)


def test_profile_zero_on_literal():
    prof = profile(Dyadic(0), 8, LIT)
    for e in prof:
        assert e.status == OK and e.ratio == Fraction(2 * e.n + 1, e.n)


def test_profile_empty():
    assert profile(Dyadic(5, -3), 0, LIT) == []
    with pytest.raises(SpecError):
        profile(Dyadic(5, -3), -1, LIT)


def test_profile_gamma_ratio_convergence():
    prof = profile(Dyadic(5, -3), 8, GAM)
    for e in prof:
        expect = Fraction(e.n + 2 * int(math.log2(e.n)) + 1, e.n)
        assert abs(e.ratio - expect) <= Fraction(1, 8)


def test_profile_absent_marker():
    # alternating bits cost 2 per emitted bit plus the halt pair on sdm4,
    # so "01010101" needs 18 bits and is absent from a 16-bit table
    prof = profile(Dyadic(85, -8), 8, SDM)  # 0.01010101
    assert prof[6].status == OK  # 7 emits + halt = 16 bits, just fits
    assert prof[7].bits == BitString("01010101")
    assert prof[7].status == ABSENT and prof[7].H is None


def test_profile_unresolved_halts():
    # a wide enclosure resolves no bits at all
    wide = Enclosure(Dyadic(1, -3), Dyadic(3, -3))
    prof = profile(wide, 6, LIT)
    assert len(prof) == 1 and prof[0].status == UNRESOLVED
    assert prof[0].H is None


def test_profile_enclosure_alpha():
    # Z_geometric(1/2) = 1/3 = 0.0101...; its prefixes are literal outputs
    from thermoait.thermo import eval_limit
    snap = builtin_snapshot("geometric", 120)
    z = eval_limit(snap, Fraction(1, 2)).Z
    prof = profile(z, 6, LIT)
    assert [e.bits.bits for e in prof][-1] == "010101"
    assert all(e.status == OK for e in prof)


# -- invariance gaps ---------------------------------------------------

def test_gap_literal_vs_gamma():
    # tables capped so both cover exactly |x| <= 8; then
    # H_lit - H_gam = n - 2 floor(log2 n), maximised (= 3) at n = 7
    lit8 = build_table(builtin_snapshot("literal", 17, program_cap=1 << 12))
    gam8 = build_table(builtin_snapshot("gamma_literal", 15,
                                        program_cap=1 << 12))
    g = invariance_gap(lit8, gam8)
    assert g.max_abs == 3
    assert g.max_a_minus_b == 3
    assert g.max_b_minus_a == 0


def test_gap_grows_with_length():
    # at |x| = 10 the same difference reaches 10 - 2*3 = 4
    g = invariance_gap(LIT, GAM)
    assert g.max_abs == 4 and g.max_a_minus_b == 4 and g.max_b_minus_a == 0


def test_gap_self_is_zero():
    g = invariance_gap(LIT, LIT)
    assert g.max_abs == 0 and g.max_a_minus_b == 0 and g.max_b_minus_a == 0


def test_gap_single_shared_output():
    # sdm4 and literal share the empty string among others; restrict to it
    from thermoait.complexity import ComplexityTable
    a = ComplexityTable(LIT.snapshot, {LAMBDA: LIT.entries[LAMBDA]}, EXACT)
    b = ComplexityTable(SDM.snapshot, {LAMBDA: SDM.entries[LAMBDA]}, EXACT)
    g = invariance_gap(a, b)
    assert g.max_abs == abs(LIT.H(LAMBDA) - SDM.H(LAMBDA)) == 1
    assert g.shared_outputs == 1


def test_gap_disjoint_errors():
    from thermoait.complexity import ComplexityTable
    a = ComplexityTable(LIT.snapshot, {BitString("0"): (3, BitString("000"))},
                        EXACT)
    b = ComplexityTable(LIT.snapshot, {BitString("1"): (3, BitString("101"))},
                        EXACT)
    with pytest.raises(SpecError):
        invariance_gap(a, b)
