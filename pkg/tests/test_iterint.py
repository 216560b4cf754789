"""Paths, words, and the adaptive iterated-integral engine.

Numeric oracles: closed-form logarithms (log(b/a), its powers over
factorials, branch-continued values for complex endpoints), a high-
precision mpmath quadrature for one genuinely mixed word, and the Chen
shuffle and loop-monodromy identities.
"""

import cmath
import math
import random

import mpmath
import numpy as np
import pytest

from grasspoly.errors import (BudgetError, ContractViolation, PathError,
                              PoleError)
from grasspoly.iterint import (IterIntResult, PathSpec, dlog_letter,
                               homotopy_test, iterate_element, iterate_word,
                               iterate_words, monodromy_probe,
                               normalize_letter, normalize_word,
                               shuffle_test, shuffles)
from grasspoly.tensors import MultTensor, bracket_symbol, scalar_symbol

W1 = dlog_letter((1,))
W2 = dlog_letter((2,))


def zline(a, b):
    """Straight path of the single coordinate z from a to b."""
    return PathSpec.line([[complex(a)]], [[complex(b)]])


# ---------------------------------------------------------------------------
# paths


def test_path_construction_and_sampling():
    p = PathSpec.from_points([[[1.0]], [[2.0]], [[4.0]]])
    assert len(p.segments) == 2
    assert (p.count, p.dim) == (1, 1)
    assert p.point(0.0)[0, 0] == 1.0
    assert p.point(0.5)[0, 0] == 2.0
    assert p.point(1.0)[0, 0] == 4.0
    assert p.point(0.25)[0, 0] == pytest.approx(1.5)
    assert np.allclose(p.start(), [[1.0]])
    assert np.allclose(p.end(), [[4.0]])
    assert not p.is_closed()
    with pytest.raises(PathError):
        p.point(1.5)
    with pytest.raises(PathError):
        p.point(-0.1)


def test_path_contracts():
    with pytest.raises(PathError):
        PathSpec([])
    with pytest.raises(PathError):
        PathSpec([np.zeros((2, 3))])
    with pytest.raises(PathError):
        PathSpec.from_points([[[1.0]]])
    with pytest.raises(PathError):
        PathSpec.from_points([[[1.0]], [[1.0, 2.0]]])
    with pytest.raises(PathError):
        # discontinuous joint
        PathSpec([np.array([[[1.0]], [[1.0]]]),
                  np.array([[[5.0]], [[1.0]]])])
    with pytest.raises(PathError):
        zline(0, 1).then("not a path")
    with pytest.raises(AttributeError):
        zline(0, 1).segments = ()


def test_polygon_closes():
    loop = PathSpec.polygon([[[1.0]], [[1j]], [[-1.0]], [[-1j]]])
    assert loop.is_closed()
    assert len(loop.segments) == 4
    with pytest.raises(PathError):
        PathSpec.polygon([[[1.0]]])


def test_reverse_retraces_the_path():
    p = PathSpec.from_points([[[1.0, 2.0]], [[2.0, 1.0]], [[3.0, 5.0]]])
    q = p.reverse()
    for t in (0.0, 0.125, 0.5, 0.75, 1.0):
        assert np.allclose(p.point(t), q.point(1.0 - t))
    bumped = p.deform(seed=1, amplitude=0.1)
    rb = bumped.reverse()
    for t in (0.0, 0.3, 0.9):
        assert np.allclose(bumped.point(t), rb.point(1.0 - t))


def test_then_concatenates():
    a = zline(1, 2)
    b = zline(2, 5)
    c = a.then(b)
    assert len(c.segments) == 2
    assert c.point(0.5)[0, 0] == 2.0
    with pytest.raises(PathError):
        a.then(zline(3, 4))


def test_deform_fixes_endpoints_and_moves_interior():
    p = PathSpec.from_points([[[1.0], [2.0]], [[3.0], [4.0]]])
    d = p.deform(seed=7, amplitude=0.1)
    assert np.allclose(d.start(), p.start())
    assert np.allclose(d.end(), p.end())
    assert not np.allclose(d.point(0.5), p.point(0.5))
    d1 = p.deform(seed=7, amplitude=0.1)
    assert np.allclose(d.point(0.37), d1.point(0.37))
    mask = np.array([[1.0], [0.0]])
    dm = p.deform(seed=7, amplitude=0.1, mask=mask)
    assert np.allclose(dm.point(0.5)[1], p.point(0.5)[1])
    assert not np.allclose(dm.point(0.5)[0], p.point(0.5)[0])
    with pytest.raises(PathError):
        p.deform(seed=7, mask=np.ones((3, 3)))


def test_path_json_round_trip():
    p = PathSpec.from_points([[[1.0, 2.0]], [[2.0, 1.0]]]).deform(seed=3)
    q = PathSpec.from_json_dict(p.to_json_dict())
    assert len(q.segments) == len(p.segments)
    for t in (0.0, 0.25, 0.8, 1.0):
        assert np.allclose(p.point(t), q.point(t))
    with pytest.raises(PathError):
        PathSpec.from_json_dict({"segments": [{"degree": 2, "coeffs": []}]})
    with pytest.raises(PathError):
        PathSpec.from_json_dict({"nope": 1})
    with pytest.raises(PathError):
        PathSpec.from_json_dict({"segments": [{"degree": 0,
                                               "coeffs": "junk"}]})


# ---------------------------------------------------------------------------
# letters and words


def test_normalize_letter_forms():
    sym = bracket_symbol((1,))[0]
    assert normalize_letter(sym) == ((1, sym),)
    assert normalize_letter((2.5, sym)) == ((2.5, sym),)
    assert normalize_letter([(1, sym), (-1j, sym)]) == ((1, sym), (-1j, sym))
    with pytest.raises(ContractViolation):
        normalize_letter([])
    with pytest.raises(ContractViolation):
        normalize_letter([("x", sym)])
    with pytest.raises(ContractViolation):
        normalize_word([])
    assert dlog_letter((1, 2), coeff=-2) == ((-2, bracket_symbol((1, 2))[0]),)


def test_shuffles_enumeration():
    a = ("x", "y")
    b = ("u", "v", "w")
    mixed = list(shuffles(a, b))
    assert len(mixed) == math.comb(5, 2)
    assert len(set(mixed)) == len(mixed)
    for word in mixed:
        assert len(word) == 5
        assert tuple(l for l in word if l in a) == a
        assert tuple(l for l in word if l in b) == b


# ---------------------------------------------------------------------------
# single integrals against closed forms


def test_dlog_integral_is_the_log_of_the_ratio():
    r = iterate_word([W1], zline(1, 3))
    assert abs(r.value - math.log(3)) < 1e-12
    assert r.error < 1e-10
    assert r.panels >= 3
    assert not r.depth_exceeded


def test_repeated_letter_gives_log_powers_over_factorials():
    word = [W1, W1, W1, W1]
    results = iterate_words([word[:k] for k in range(1, 5)], zline(1, 2))
    for k, r in enumerate(results, start=1):
        assert abs(r.value - math.log(2) ** k / math.factorial(k)) < 1e-12
    # all words share one sweep
    assert len({r.panels for r in results}) == 1


def test_scalar_letters_integrate_to_zero():
    word = [((1, scalar_symbol("a")),), W1]
    r = iterate_word(word, zline(1, 2))
    assert r.value == 0


def test_mixed_word_against_mpmath_quadrature():
    # coordinates (z, z - 5) walked from z = 2 to 3; the word integrates
    # log((5-z)/3) against d log z
    path = PathSpec.line([[2.0], [-3.0]], [[3.0], [-2.0]])
    r = iterate_word((W2, W1), path)
    mpmath.mp.dps = 30
    oracle = complex(mpmath.quad(
        lambda z: mpmath.log((5 - z) / 3) / z, [2, 3]))
    assert abs(r.value - oracle) < 1e-12


def test_complex_endpoints_follow_the_continued_branch():
    d = 1e-3
    a, b = complex(-1, d), complex(1, d)
    r = iterate_word([W1], zline(a, b))
    assert abs(r.value - (cmath.log(b) - cmath.log(a))) < 1e-10


def test_reverse_negates_single_integrals():
    p = zline(1, 7)
    fwd = iterate_word([W1], p).value
    bwd = iterate_word([W1], p.reverse()).value
    assert abs(fwd + bwd) < 1e-12


def test_path_composition_chains_prefixes():
    p1 = zline(1, 2)
    p2 = zline(2, 5)
    word = [W1, W1, W1]
    whole = iterate_word(word, p1.then(p2)).value
    prefixes = [word[:k] for k in range(1, 4)]
    first = iterate_words(prefixes, p1)
    initial = np.array([1.0 + 0j] + [r.value for r in first])
    resumed = iterate_word(word, p2, initial=initial).value
    assert abs(whole - resumed) < 1e-12
    with pytest.raises(ContractViolation):
        iterate_word(word, p2, initial=np.zeros(7))


# ---------------------------------------------------------------------------
# failure modes


def test_pole_on_the_path_is_detected():
    with pytest.raises(PoleError):
        iterate_word([W1], zline(0, 1))


def test_symmetric_crossing_is_detected_despite_cancellation():
    # the integrand is odd around the zero, so plain sampling converges
    # to 0; the phase monitor must still refuse
    with pytest.raises(PoleError):
        iterate_word([W1], zline(-1, 1))


def test_budget_exhaustion():
    with pytest.raises(BudgetError):
        iterate_word([W1], zline(1, 3), budget=2)


def test_word_and_path_mismatches():
    with pytest.raises(PathError):
        iterate_word([W1], "not a path")
    with pytest.raises(ContractViolation):
        iterate_words([], zline(1, 2))
    with pytest.raises(ContractViolation):
        iterate_word([dlog_letter((1, 2))], zline(1, 2))
    with pytest.raises(ContractViolation):
        iterate_word([dlog_letter((4,))], zline(1, 2))


def test_element_contracts():
    with pytest.raises(ContractViolation):
        iterate_element("tensor", zline(1, 2))
    with pytest.raises(ContractViolation):
        iterate_element(MultTensor.zero(2), zline(1, 2))


def test_result_json_shape():
    r = iterate_word([W1], zline(1, 3))
    d = r.to_json_dict()
    assert set(d) == {"value", "error", "panels"}
    assert d["value"] == [r.value.real, r.value.imag]
    assert isinstance(r, IterIntResult)


# ---------------------------------------------------------------------------
# elements


SAFE_BASE = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 3.0]]
SAFE_TARGET = [[1.1, 0.02], [0.03, 1.05], [0.95, 1.1], [2.1, 3.2]]


def safe_element_path():
    return PathSpec.line(SAFE_BASE, SAFE_TARGET)


def test_safe_path_really_is_generic():
    for t in np.linspace(0.0, 1.0, 101):
        m = (1 - t) * np.array(SAFE_BASE) + t * np.array(SAFE_TARGET)
        for i in range(4):
            for j in range(i + 1, 4):
                assert abs(np.linalg.det(m[[i, j]])) > 0.5


def test_iterate_element_is_the_weighted_sum_of_words():
    path = safe_element_path()
    t = MultTensor.from_terms(2, [
        ((bracket_symbol((1, 2))[0], bracket_symbol((1, 3))[0]), 2),
        ((bracket_symbol((2, 3))[0], bracket_symbol((1, 4))[0]), -3)])
    combined = iterate_element(t, path)
    manual = 0
    for slots, coeff in t.items_sorted():
        word = tuple(((1, sym),) for sym in slots)
        manual += complex(coeff) * iterate_word(word, path).value
    assert abs(combined.value - manual) < 1e-12


# ---------------------------------------------------------------------------
# the identity probes


def test_homotopy_invariance_of_the_degree2_element():
    from grasspoly.elements import build_element

    report = homotopy_test(build_element(2).tensor, safe_element_path(),
                           deformations=2, amplitude=0.02, quad_tol=1e-10)
    assert report["status"] == "pass"
    assert report["spread"] < 1e-8
    assert len(report["values"]) == 3


def test_homotopy_flags_a_non_integrable_word():
    path = PathSpec.line([[1.0], [2.0]], [[3.0], [5.0]])
    report = homotopy_test((W1, W2), path, deformations=3)
    assert report["status"] == "fail"
    assert report["spread"] > 1e-4


def test_homotopy_of_single_letters_is_exact():
    path = PathSpec.line([[1.0], [2.0]], [[3.0], [5.0]])
    report = homotopy_test([W1], path, deformations=3)
    assert report["status"] == "pass"
    assert report["spread"] < 1e-12


def test_shuffle_identity():
    path = PathSpec.line([[1.0], [2.0]], [[3.0], [5.0]])
    report = shuffle_test([W1], [W2], path)
    assert report["status"] == "pass"
    assert report["difference"] < 1e-12
    assert report["shuffles"] == 2

    longer = shuffle_test([W1, W2], [W2], path)
    assert longer["status"] == "pass"
    assert longer["difference"] < 1e-10
    assert longer["shuffles"] == 3


def test_monodromy_of_dlog_counts_winding():
    loop = PathSpec.polygon([[[1.0]], [[1j]], [[-1.0]], [[-1j]]])
    val = monodromy_probe([W1], loop)
    assert abs(val - 2j * math.pi) < 1e-10
    doubled = monodromy_probe([W1], loop.then(loop))
    assert abs(doubled - 4j * math.pi) < 1e-10
    reversed_val = monodromy_probe([W1], loop.reverse())
    assert abs(reversed_val + 2j * math.pi) < 1e-10


def test_monodromy_requires_a_closed_loop():
    with pytest.raises(PathError):
        monodromy_probe([W1], zline(1, 2))
    with pytest.raises(PathError):
        monodromy_probe([W1], "loop")


# ---------------------------------------------------------------------------
# determinism across worker counts


def test_thread_count_does_not_change_values(monkeypatch):
    from grasspoly.elements import build_element

    path = safe_element_path()
    el = build_element(2).tensor

    def run():
        rep = homotopy_test(el, path, deformations=3, amplitude=0.02,
                            quad_tol=1e-10)
        return rep["values"], rep["spread"], rep["panels"]

    monkeypatch.setenv("GRASSPOLY_THREADS", "1")
    serial = run()
    monkeypatch.setenv("GRASSPOLY_THREADS", "4")
    threaded = run()
    assert serial == threaded
