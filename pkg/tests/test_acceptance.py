"""End-to-end acceptance suite.  Each test prints a single pass/fail line
and enforces its stated runtime budget."""
import random
import sys
import time
from collections import Counter
from fractions import Fraction

from cuecoe.correlator import CorrelatorSpec, MomentSpec, moment, moment_bruteforce
from cuecoe.factorizations import (canonical_orthogonal_target,
                                   canonical_unitary_target, count_monotone,
                                   count_palindromic, delta_series_o,
                                   delta_series_u, enumerate_monotone,
                                   enumerate_palindromic)
from cuecoe.haar_mc import mc_correlator, mc_moment
from cuecoe.perms import (Permutation, bar_swap, barred_domain,
                          halved_cycle_type, is_valid_orthogonal_target,
                          target_orthogonal)
from cuecoe.ratfun import Poly, RationalFunction, laurent_expand
from cuecoe.ribbon import (UNITARY, RibbonDiagram, cancellation_partner,
                           certificate, enumerate_diagrams, read_target,
                           signed_sum)
from cuecoe.weingarten import partitions, v_coe, v_cue

N = Poly.N()


def report(name: str, ok: bool):
    print(f"{name}: {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    assert ok, name


def test_ac1_exact_rational_functions():
    t0 = time.time()
    ok = (v_cue((1, 1)) == RationalFunction(1, N * N - 1)
          and v_cue((2,)) == RationalFunction(-1, N * (N * N - 1)))
    elapsed = time.time() - t0
    report("AC-1", ok and elapsed < 0.5)


def test_ac2_unitary_series_equivalence():
    t0 = time.time()
    ok = True
    for t in range(1, 5):
        for part in partitions(t):
            order = t + 6
            ok = ok and delta_series_u(part, order) == laurent_expand(v_cue(part), order)
    report("AC-2", ok and time.time() - t0 < 10)


def test_ac3_orthogonal_series_equivalence():
    t0 = time.time()
    ok = True
    for t in range(1, 4):
        for part in partitions(t):
            order = t + 5
            ok = ok and delta_series_o(part, order) == laurent_expand(v_coe(part), order)
            tau = canonical_orthogonal_target(part)
            for v in range(0, order - t + 1):
                ok = ok and count_palindromic(part, v) == len(enumerate_palindromic(tau, v))
    report("AC-3", ok and time.time() - t0 < 60)


def test_ac4_diagram_counts():
    t0 = time.time()
    tau_id2 = canonical_unitary_target((1, 1))
    ds = enumerate_diagrams(tau_id2, 4, UNITARY)
    orders = Counter(d.contribution().order for d in ds)
    ok = orders[2] == 1 and orders[4] == 5
    s = signed_sum(tau_id2, 4, UNITARY)
    ok = ok and s.terms() == [(2, Fraction(1)), (4, Fraction(1))]
    tau_sw = canonical_unitary_target((2,))
    ds2 = enumerate_diagrams(tau_sw, 3, UNITARY)
    ok = ok and len(ds2) == 1 and ds2[0].contribution().order == 3
    report("AC-4", ok and time.time() - t0 < 60)


def test_ac5_cancellation_involution():
    t0 = time.time()
    ok = True
    for cyc in [(1,), (1, 1), (2,)]:
        t = sum(cyc)
        tau = canonical_unitary_target(cyc)
        ds = enumerate_diagrams(tau, t + 3, UNITARY)
        certs = {certificate(d): d for d in ds}
        fixed = []
        pair_sum: dict[frozenset, Fraction] = {}
        for d in ds:
            p = cancellation_partner(d, UNITARY)
            if not isinstance(p, RibbonDiagram):
                fixed.append((d, p))
                continue
            cp = certificate(p)
            ok = ok and cp in certs
            if not ok:
                break
            q = cancellation_partner(certs[cp], UNITARY)
            cd, cpc = d.contribution(), p.contribution()
            ok = (ok and isinstance(q, RibbonDiagram)
                  and certificate(q) == certificate(d)      # involution
                  and (cd.v + cpc.v) % 2 == 1               # parity flip
                  and cd.order == cpc.order                 # same e - v
                  and read_target(p, UNITARY) == tau)       # same target
            key = frozenset((certificate(d), cp))
            pair_sum[key] = pair_sum.get(key, Fraction(0)) + cd.sign
        ok = ok and all(s == 0 for s in pair_sum.values())
        # fixed points biject onto the monotone factorizations
        recs = {p.factors for _, p in fixed}
        want = {f.factors for v in range(0, 4)
                for f in enumerate_monotone(tau, v)}
        ok = ok and len(recs) == len(fixed) and recs == want
    report("AC-5", ok)


def test_ac6_factorization_recursions():
    t0 = time.time()
    ok = True
    for t in range(1, 6):
        for part in partitions(t):
            tau = canonical_unitary_target(part)
            for v in range(0, 7):
                ok = ok and count_monotone(part, v) == len(enumerate_monotone(tau, v))
    report("AC-6", ok and time.time() - t0 < 30)


def test_ac7_moments():
    ok = True
    for ens in ("cue", "coe"):
        for traces in [(1,), (2,), (1, 1)]:
            for n1 in range(1, 4):
                for n2 in range(1, 4):
                    s = MomentSpec(traces, n1, n2, "transmission", ens)
                    ok = ok and moment(s) == moment_bruteforce(s)
    for n1 in range(1, 5):
        for n2 in range(1, 5):
            ok = ok and moment(MomentSpec((1,), n1, n2)) == Fraction(n1 * n2, n1 + n2)
            ok = ok and moment(MomentSpec((1,), n1, n2, "transmission", "coe")) == \
                Fraction(n1 * n2, n1 + n2 + 1)
    report("AC-7", ok)


def test_ac8_monte_carlo():
    t0 = time.time()
    samples, n = 10 ** 6, 4
    ok = True
    checks = [
        (mc_correlator(CorrelatorSpec(((1, 1),), ((1, 1),), "cue"), n, samples, 42),
         v_cue((1,)).evaluate(n)),
        (mc_correlator(CorrelatorSpec(((1, 2),), ((1, 2),), "coe"), n, samples, 43),
         v_coe((1,)).evaluate(n)),
        (mc_correlator(CorrelatorSpec(((1, 1),), ((1, 1),), "coe"), n, samples, 44),
         2 * v_coe((1,)).evaluate(n)),
        (mc_moment(MomentSpec((1,), 2, 2, "transmission", "cue"), samples, 45),
         moment(MomentSpec((1,), 2, 2, "transmission", "cue"))),
        (mc_moment(MomentSpec((1,), 2, 2, "transmission", "coe"), samples, 46),
         moment(MomentSpec((1,), 2, 2, "transmission", "coe"))),
    ]
    for est, exact in checks:
        ok = ok and abs(est.mean.real - float(exact)) <= 5 * est.stderr
        ok = ok and abs(est.mean.imag) <= 5 * est.stderr
    report("AC-8", ok and time.time() - t0 < 300)


def test_ac9_orthogonal_target_properties():
    rng = random.Random(20260826)
    ok = True
    for _ in range(10 ** 4):
        t = rng.randint(1, 6)
        dom = list(barred_domain(t))
        img = dom[:]
        rng.shuffle(img)
        varpi = Permutation(t, True, tuple(img))
        tau = target_orthogonal(varpi)
        if not is_valid_orthogonal_target(tau):
            ok = False
            break
        T = bar_swap(t)
        m = T * tau
        if any(m(z) == z or m(m(z)) != z for z in tau.domain):
            ok = False
            break
        cycles = {frozenset(c) for c in tau.cycles()}
        if any(frozenset(z.bar for z in c) == c or
               frozenset(z.bar for z in c) not in cycles for c in cycles):
            ok = False
            break
        if halved_cycle_type(tau).total != t:
            ok = False
            break
    report("AC-9", ok)
