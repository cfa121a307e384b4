import math

import numpy as np
import pytest

from mobius_stability import (
    UnsupportedMapError,
    apply,
    conjugator,
    fixed_points,
    invariant_circle,
    invariant_line,
    inverse,
    normalize,
    on_line,
    separation_L,
)
from mobius_stability.geometry import circle_parameter, circle_point
from mobius_stability.presets import preset
from mobius_stability.sphere import INF

from .conftest import random_elliptic

S3 = math.sqrt(3)


def reflect(z, line):
    # mirror image across the line through line.point with unit direction
    u = line.direction
    return line.point + u * ((z - line.point) / u).conjugate()


def test_real_map_line_is_real_axis(rng):
    for _ in range(20):
        line = invariant_line(random_elliptic(rng, real=True))
        assert abs(line.point.imag) <= 1e-12
        assert abs(line.direction.imag) <= 1e-12
        assert on_line(line, 7.5)
        assert not on_line(line, 1j)


def test_line_of_p():
    p = preset("p")
    line = invariant_line(p)
    assert line.point == pytest.approx(S3 / 2)
    assert abs(line.direction) == pytest.approx(1) and line.direction.imag == pytest.approx(0, abs=1e-15)
    assert on_line(line, -p.d / p.c) and on_line(line, p.a / p.c)
    fp = fixed_points(p)
    assert abs(fp.alpha + p.d / p.c) == pytest.approx(1 / abs(p.c))
    assert abs(fp.beta + p.d / p.c) == pytest.approx(1 / abs(p.c))


def test_on_line_infinity_and_tol():
    line = invariant_line(preset("p"))
    assert on_line(line, INF)
    assert not on_line(line, 1j, 1e-9)
    with pytest.raises(ValueError):
        on_line(line, 0, 0.0)


def test_line_invariance_random_maps(rng):
    for _ in range(300):
        m = random_elliptic(rng)
        line = invariant_line(m)
        for s in line.sample(rng.normal(scale=5.0, size=100)):
            assert on_line(line, apply(m, s), 1e-8)
        fp = fixed_points(m)
        assert on_line(line, -m.d / m.c) and on_line(line, m.a / m.c)
        assert abs(abs(fp.alpha + m.d / m.c) - 1 / abs(m.c)) <= 1e-9
        assert abs(abs(fp.beta + m.d / m.c) - 1 / abs(m.c)) <= 1e-9


def test_line_is_h_preimage_of_unit_circle(rng):
    m = random_elliptic(rng)
    h = conjugator(m)
    line = invariant_line(m)
    for s in line.sample(np.linspace(-20, 20, 41)):
        assert abs(abs(apply(h, s).value) - 1) <= 1e-9
    assert abs(apply(h, INF).value - 1) <= 1e-12


def test_circle_formulas_by_sampling(rng):
    for _ in range(50):
        m = random_elliptic(rng)
        h = conjugator(m)
        for r in (0.1, 0.5, 0.9, 1.1, 2.0, 10.0):
            circle = invariant_circle(m, r)
            for z in circle.sample(16):
                assert abs(abs(apply(h, z).value) - r) <= 1e-9 * max(1, r)


def test_circle_invariance(rng):
    for _ in range(50):
        m = random_elliptic(rng)
        for r in (0.1, 0.5, 0.9, 1.1, 2.0, 10.0):
            c = invariant_circle(m, r)
            for z in c.sample(64, phase=rng.uniform(0, 2 * np.pi)):
                w = apply(m, z).value
                assert abs(abs(w - c.center) - c.radius) <= 1e-8 * c.radius


def test_circle_contains_preimages():
    m = preset("golden")
    h_inv = inverse(conjugator(m))
    c = invariant_circle(m, 0.3)
    for w in (0.3, -0.3):
        z = apply(h_inv, w).value
        assert abs(abs(z - c.center) - c.radius) <= 1e-12


def test_reflection_pairs(rng):
    for m in [preset("p"), preset("golden")] + [random_elliptic(rng) for _ in range(30)]:
        line = invariant_line(m)
        for r in (0.1, 0.5, 2.0, 10.0):
            c, c_inv = invariant_circle(m, r), invariant_circle(m, 1 / r)
            assert abs(reflect(c.center, line) - c_inv.center) <= 1e-9 * (1 + abs(c.center))
            assert c.radius == pytest.approx(c_inv.radius, rel=1e-9)


def test_p_circles_mirror_across_real_axis():
    p = preset("p")
    c, c_inv = invariant_circle(p, 0.5), invariant_circle(p, 2.0)
    assert c.center == pytest.approx(c_inv.center.conjugate())
    assert c.radius == pytest.approx(c_inv.radius)


def test_small_circles_shrink_to_alpha():
    m = preset("golden")
    alpha = fixed_points(m).alpha
    radii = [invariant_circle(m, r).radius for r in (0.1, 0.01, 0.001)]
    assert radii == sorted(radii, reverse=True)
    c = invariant_circle(m, 1e-3)
    assert abs(c.center - alpha) < c.radius
    assert abs(c.center - alpha) < 1e-5


def test_circle_parameter_errors():
    m = preset("golden")
    with pytest.raises(ValueError):
        invariant_circle(m, 0.0)
    with pytest.raises(ValueError):
        invariant_circle(m, 1.0)
    with pytest.raises(UnsupportedMapError):
        invariant_circle(normalize((3, 1, 1, 1)), 0.5)
    with pytest.raises(UnsupportedMapError):
        invariant_line(normalize((3, 1, 1, 1)))


def test_circle_point_and_parameter():
    m = preset("golden")
    z = circle_point(m, 0.5, 1.0)
    assert circle_parameter(m, z) == pytest.approx(0.5)
    assert circle_parameter(m, INF) == pytest.approx(1.0)
    assert circle_parameter(m, 0.0) == pytest.approx(1.0)


def test_separation_L_examples(rng):
    assert separation_L(preset("p")) == pytest.approx(0.5)
    assert separation_L(preset("r")) == pytest.approx(S3 / 2)
    for _ in range(100):
        m = random_elliptic(rng)
        fp = fixed_points(m)
        line = invariant_line(m)
        # distance from alpha to the line, measured along the normal
        normal = line.direction * 1j
        dist = abs(((fp.alpha - line.point) * normal.conjugate()).real)
        assert separation_L(m) == pytest.approx(dist, rel=1e-9)
        assert separation_L(m) > 0


def test_json_descriptors():
    m = preset("p")
    assert set(invariant_line(m).to_json()) == {"alpha", "beta"}
    assert set(invariant_circle(m, 2).to_json()) == {"r", "center", "radius"}
