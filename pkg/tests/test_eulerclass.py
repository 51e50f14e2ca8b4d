import random

import mpmath as mp
import pytest

from geodesica.errors import MilnorWoodViolated, NoLiftExists, PrecisionExhausted
from geodesica.eulerclass import (
    EulerResult,
    canonical_section,
    euler_number,
    euler_tuple,
    lift_representation,
    obstruction_verdict,
    closed_surface_obstruction,
    solve_integer_system,
    to_su11,
    ucover_eval,
    ucover_identity,
    ucover_inv,
    ucover_mul,
    ucover_pow,
)
from geodesica.intervals import ComplexIv, iv, prec_guard
from geodesica.knotgroup import Word, evaluate_word


def _iv4(a, b, c, d):
    return (iv.mpf(a), iv.mpf(b), iv.mpf(c), iv.mpf(d))


class TestToSU11:
    def test_identity(self):
        with prec_guard(96):
            lift = to_su11(_iv4(1, 0, 0, 1))
            assert float(lift.gamma.abs_upper()) < 1e-20
            assert abs(float(lift.omega.mid.a)) < 1e-20

    def test_parabolic_upper(self):
        # (1 1; 0 1) -> ((1+2i)/5, arctan(1/2))
        with prec_guard(96):
            lift = to_su11(_iv4(1, 1, 0, 1))
            assert abs(mp.mpf(lift.gamma.re.mid.a) - mp.mpf(1) / 5) < 1e-25
            assert abs(mp.mpf(lift.gamma.im.mid.a) - mp.mpf(2) / 5) < 1e-25
            assert abs(mp.mpf(lift.omega.mid.a) - mp.atan(mp.mpf(1) / 2)) < 1e-25

    def test_parabolic_lower_at_real_place(self, rep_73):
        # (1 0; z 1) -> (zi/(2-zi), -arctan(z/2)) for the negative real roots
        with prec_guard(128):
            place = rep_73.field.real_places()[0]
            z = place.embed(rep_73.field.gen(), 96)
            lift = to_su11(_iv4(1, 0, z, 1))
            zm = mp.mpf(z.mid.a)
            expected_gamma = mp.mpc(0, zm) / (2 - mp.mpc(0, zm))
            got = mp.mpc(mp.mpf(lift.gamma.re.mid.a), mp.mpf(lift.gamma.im.mid.a))
            assert abs(got - expected_gamma) < 1e-25
            assert abs(mp.mpf(lift.omega.mid.a) - (-mp.atan(zm / 2))) < 1e-25

    def test_wide_interval_rejected(self):
        # alpha cannot vanish on exact SL(2,R) input (|alpha|^2 = 1 + |beta|^2),
        # but the guard must fire on hopelessly wide interval input
        with prec_guard(96):
            wide = iv.mpf([-10, 10])
            with pytest.raises(PrecisionExhausted):
                to_su11((wide, wide, wide, wide))


class TestGroupLaw:
    def test_identity_neutral(self):
        with prec_guard(96):
            x = to_su11(_iv4(1, 1, 0, 1))
            y = ucover_mul(x, ucover_identity())
            assert float((y.gamma - x.gamma).abs_upper()) < 1e-25
            assert abs(float((y.omega - x.omega).mid.a)) < 1e-25

    def test_central_element_squares(self):
        with prec_guard(96):
            c = type("L", (), {})
            from geodesica.eulerclass import LiftedElement

            c = LiftedElement(ComplexIv.zero(), iv.pi)
            c2 = ucover_mul(c, c)
            assert abs(float(c2.omega.mid.a) - float(2 * mp.pi)) < 1e-25
            assert float(c2.gamma.abs_upper()) < 1e-25

    def test_inverse(self):
        with prec_guard(96):
            x = to_su11(_iv4(2, 1, 1, 1))
            e = ucover_mul(x, ucover_inv(x))
            assert float(e.gamma.abs_upper()) < 1e-20
            assert abs(float(e.omega.mid.a)) < 1e-20

    def test_projection_oracle(self):
        # project(ucover product) == to_su11(matrix product), omega mod pi
        rng = random.Random(7)
        with prec_guard(160):
            for _ in range(15):
                mats = []
                for _ in range(2):
                    m = (1, 0, 0, 1)
                    for _ in range(rng.randint(1, 4)):
                        t = rng.randint(-3, 3)
                        if rng.random() < 0.5:
                            el = (1, t, 0, 1)
                        else:
                            el = (1, 0, t, 1)
                        m = (
                            m[0] * el[0] + m[1] * el[2],
                            m[0] * el[1] + m[1] * el[3],
                            m[2] * el[0] + m[3] * el[2],
                            m[2] * el[1] + m[3] * el[3],
                        )
                    mats.append(m)
                a, b = mats
                prod = (
                    a[0] * b[0] + a[1] * b[2],
                    a[0] * b[1] + a[1] * b[3],
                    a[2] * b[0] + a[3] * b[2],
                    a[2] * b[1] + a[3] * b[3],
                )
                try:
                    la, lb = to_su11(_iv4(*a)), to_su11(_iv4(*b))
                    lp = to_su11(_iv4(*prod))
                except PrecisionExhausted:
                    continue  # alpha = 0 (elliptic of order two); not in scope
                got = ucover_mul(la, lb)
                dg = float((got.gamma - lp.gamma).abs_upper())
                assert dg < 1e-30
                dw = float((got.omega - lp.omega).mid.a) / float(mp.pi)
                assert abs(dw - round(dw)) < 1e-30

    def test_pow_matches_repeated_mul(self):
        with prec_guard(96):
            x = to_su11(_iv4(1, 1, 0, 1))
            p3 = ucover_pow(x, 3)
            m3 = ucover_mul(ucover_mul(x, x), x)
            assert float((p3.gamma - m3.gamma).abs_upper()) < 1e-25
            p_neg = ucover_mul(p3, ucover_pow(x, -3))
            assert abs(float(p_neg.omega.mid.a)) < 1e-20


class TestCanonicalSection:
    def test_tau_two(self):
        with prec_guard(96):
            s = canonical_section(iv.mpf(2))
            assert abs(float(s.gamma.re.mid.a) - 0.5) < 1e-25
            assert abs(float(s.gamma.im.mid.a) - 0.5) < 1e-25
            assert abs(float(s.omega.mid.a) - float(mp.pi / 4)) < 1e-25

    def test_tau_zero(self):
        with prec_guard(96):
            s = canonical_section(iv.mpf(0))
            assert float(s.gamma.abs_upper()) < 1e-25
            assert abs(float(s.omega.mid.a)) < 1e-25

    def test_pretzel_value(self, pretzel_1):
        with prec_guard(128):
            place = pretzel_1.field.real_places()[0]
            tau = place.embed(pretzel_1.rep.longitude_translation(), 96)
            s = canonical_section(tau)
            # tau = -6/z is about -16.6; omega = arctan(tau/2) is near -pi/2
            assert float(s.omega.mid.a) < -1.4


class TestIntegerSolver:
    def test_two_bridge_shape(self):
        assert solve_integer_system([[1, -1]], [-3]) == [-3, 0]

    def test_pretzel_shape(self):
        m = solve_integer_system([[1, -1, 0], [0, 1, -1]], [2, 5])
        E = [[1, -1, 0], [0, 1, -1]]
        for row, b in zip(E, [2, 5]):
            assert sum(r * x for r, x in zip(row, m)) == b

    def test_inconsistent(self):
        with pytest.raises(NoLiftExists):
            solve_integer_system([[2, 0], [0, 2]], [1, 2])

    def test_random_solvable(self):
        rng = random.Random(3)
        for _ in range(25):
            E = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(2)]
            x = [rng.randint(-4, 4) for _ in range(3)]
            b = [sum(r * v for r, v in zip(row, x)) for row in E]
            m = solve_integer_system(E, b)
            for row, bb in zip(E, b):
                assert sum(r * v for r, v in zip(row, m)) == bb


class TestLifts:
    def test_relators_annihilated(self, rep_73):
        place = rep_73.field.real_places()[0]
        with prec_guard(160):
            lifts = lift_representation(rep_73, place, 128)
            for rel in rep_73.presentation.relators:
                val = ucover_eval(rel, lifts)
                assert float(val.gamma.abs_upper()) < 1e-9
                assert abs(float(val.omega.mid.a)) < 1e-9

    def test_broken_relator_fails(self, rep_73):
        # feed the defect solver an unsolvable system directly
        with pytest.raises(NoLiftExists):
            solve_integer_system([[0, 0]], [1])


class TestEulerNumbers:
    def test_73_anchor(self, rep_73):
        results = euler_tuple(rep_73)
        assert tuple(r.n for r in results) == (3, 1)
        for r in results:
            assert r.residual < 1e-9

    def test_74_genus_one(self, rep_74):
        results = euler_tuple(rep_74)
        assert tuple(r.n for r in results) == (1,)

    def test_lift_independence_73(self, rep_73):
        rng = random.Random(11)
        place = rep_73.field.real_places()[0]
        base = euler_number(rep_73, place).n
        for _ in range(20):
            offsets = [rng.randint(-5, 5) for _ in range(2)]
            assert euler_number(rep_73, place, offsets=offsets).n == base

    def test_lift_independence_74(self, rep_74):
        rng = random.Random(13)
        place = rep_74.field.real_places()[0]
        base = euler_number(rep_74, place).n
        for _ in range(20):
            offsets = [rng.randint(-5, 5) for _ in range(2)]
            assert euler_number(rep_74, place, offsets=offsets).n == base

    def test_conjugation_invariance_73(self, rep_73):
        # replacing the longitude by a conjugate and conjugating the section
        # leaves the central gap unchanged
        place = rep_73.field.real_places()[0]
        with prec_guard(192):
            lifts = lift_representation(rep_73, place, 160)
            ell = rep_73.presentation.longitude
            tau = place.embed(rep_73.longitude_translation(), 160)
            section = canonical_section(tau)
            base = ucover_eval(ell, lifts)
            n0 = round(float(((base.omega - section.omega) / iv.pi).mid.a))
            for conj in (Word.gen(0), Word.gen(1), Word.gen(0) * Word.gen(1, -1)):
                word = conj * ell * conj.inverse()
                lifted = ucover_eval(word, lifts)
                g = ucover_eval(conj, lifts)
                sec = ucover_mul(ucover_mul(g, section), ucover_inv(g))
                n = round(float(((lifted.omega - sec.omega) / iv.pi).mid.a))
                assert n == n0

    def test_pretzel_euler(self, pretzel_1):
        results = euler_tuple(pretzel_1.rep)
        assert tuple(abs(r.n) for r in results) == (1,)


class TestPrecisionCap:
    def test_env_override_read(self, monkeypatch):
        from geodesica.eulerclass import precision_cap

        monkeypatch.delenv("GEODESICA_PRECISION_CAP", raising=False)
        assert precision_cap() == 1024
        monkeypatch.setenv("GEODESICA_PRECISION_CAP", "4096")
        assert precision_cap() == 4096

    def test_tiny_cap_forces_failure(self, rep_73, monkeypatch):
        monkeypatch.setenv("GEODESICA_PRECISION_CAP", "64")
        place = rep_73.field.real_places()[0]
        with pytest.raises(PrecisionExhausted):
            euler_number(rep_73, place, precision_bits=128)


class TestVerdicts:
    def _closed(self, rep, flags=None):
        return closed_surface_obstruction(rep, flags)

    def test_closed_obstruction_74(self, rep_74):
        rec = self._closed(rep_74)
        assert rec["no_closed_tgs"]
        assert rec["no_real_subfield_certified"]

    def test_closed_obstruction_pretzel(self, pretzel_1):
        assert self._closed(pretzel_1.rep)["no_closed_tgs"]

    def test_closed_obstruction_flagged_subfield(self, rep_73):
        rec = self._closed(rep_73, {"no_real_subfield": False})
        assert rec["no_closed_tgs"] is False

    def test_thm_verdict(self, rep_73):
        results = euler_tuple(rep_73)
        arith = self._closed(rep_73, {"no_real_subfield": True, "no_quadratic_subfield": True})
        report = obstruction_verdict(
            "7_3", 2, False, results, arith, no_quadratic_subfield=True
        )
        assert report.verdict == "NoTGS_euler_bound"
        assert "1 < 2g-1 = 3" in report.justification

    def test_genus_one_short_circuit(self, rep_74):
        results = euler_tuple(rep_74)
        arith = self._closed(rep_74)
        report = obstruction_verdict("7_4", 1, False, results, arith, known_unique=False)
        assert report.verdict == "NoClosedTGS_arithmetic"
        known = obstruction_verdict("7_4", 1, False, results, arith, known_unique=True)
        assert known.verdict == "KnownUniqueSurface"

    def test_fibered_rule(self, rep_73):
        results = euler_tuple(rep_73)
        arith = self._closed(rep_73, {"no_real_subfield": True})
        report = obstruction_verdict("6_2-style", 2, True, results, arith)
        assert report.verdict == "NoTGS_fibered"

    def test_milnor_wood_violation_detected(self, rep_73):
        fake = (EulerResult(place_index=0, n=9, residual=0.0, precision_bits=128),)
        arith = self._closed(rep_73, {"no_real_subfield": True})
        with pytest.raises(MilnorWoodViolated):
            obstruction_verdict("bogus", 2, False, fake, arith)

    def test_milnor_wood_bound_on_census(self, rep_73, rep_74, pretzel_1):
        for rep, genus in ((rep_73, 2), (rep_74, 1), (pretzel_1.rep, 1)):
            for r in euler_tuple(rep):
                assert abs(r.n) <= 2 * genus - 1
