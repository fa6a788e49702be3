"""Modulation profiles and protocol serialization."""

import numpy as np
import pytest

from spinbath.protocol import Modulation, Protocol


class TestConstant:
    def test_value(self):
        m = Modulation.constant(0.75)
        assert m(0.0) == 0.75
        assert m(123.4) == 0.75

    def test_vectorized(self):
        m = Modulation.constant(2.0)
        out = m(np.linspace(0, 1, 5))
        assert np.allclose(out, 2.0)
        assert out.shape == (5,)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Modulation.constant(-1.0)


class TestBox:
    def test_hard_edges(self):
        m = Modulation("box", {"t_on": 1.0, "t_off": 3.0, "amplitude": 2.0})
        assert m(0.5) == 0.0
        assert m(1.0) == 2.0
        assert m(2.9) == 2.0
        assert m(3.0) == 0.0

    def test_smooth_edges(self):
        m = Modulation("box", {"t_on": 2.0, "t_off": 10.0, "rise_time": 0.5, "amplitude": 1.0})
        assert m(2.0) == pytest.approx(0.5, abs=1e-3)
        assert m(6.0) == pytest.approx(1.0, abs=1e-3)
        assert m(10.0) == pytest.approx(0.5, abs=1e-3)
        ts = np.linspace(0, 12, 200)
        vals = m(ts)
        assert np.all(vals >= 0)
        assert np.all(vals <= 1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            Modulation("box", {"t_on": 3.0, "t_off": 1.0})
        with pytest.raises(ValueError):
            Modulation("box", {"t_on": 0.0})
        with pytest.raises(ValueError):
            Modulation("box", {"t_on": 0.0, "t_off": 1.0, "rise_time": -0.1})

    def test_switch_off_time(self):
        m = Modulation("box", {"t_on": 1.0, "t_off": 3.0, "rise_time": 0.25})
        assert m.switch_off_time() == pytest.approx(4.0)
        assert m(m.switch_off_time()) < 0.02


class TestSigmoidOff:
    def test_midpoint_and_monotonicity(self):
        m = Modulation("sigmoid_off", {"t_mid": 5.0, "width": 0.8, "amplitude": 1.4})
        assert m(5.0) == pytest.approx(0.7, rel=1e-12)
        vals = m(np.linspace(0, 10, 50))
        assert np.all(np.diff(vals) < 0)
        assert m(0.0) == pytest.approx(1.4, abs=1e-2)

    def test_validation(self):
        with pytest.raises(ValueError):
            Modulation("sigmoid_off", {"width": 1.0})
        with pytest.raises(ValueError):
            Modulation("sigmoid_off", {"t_mid": 1.0, "width": 0.0})

    def test_switch_off_time(self):
        m = Modulation("sigmoid_off", {"t_mid": 5.0, "width": 0.5})
        assert m.switch_off_time() == pytest.approx(7.0)
        assert m(m.switch_off_time()) < 0.02


class TestTable:
    def test_interpolation(self):
        m = Modulation("table", {"ts": [0.0, 1.0, 2.0], "values": [0.0, 1.0, 0.5]})
        assert m(0.5) == pytest.approx(0.5)
        assert m(1.5) == pytest.approx(0.75)

    def test_clamped_ends(self):
        m = Modulation("table", {"ts": [1.0, 2.0], "values": [0.3, 0.8]})
        assert m(-5.0) == pytest.approx(0.3)
        assert m(99.0) == pytest.approx(0.8)

    def test_validation(self):
        with pytest.raises(ValueError):
            Modulation("table", {"ts": [0.0], "values": [1.0]})
        with pytest.raises(ValueError):
            Modulation("table", {"ts": [0.0, 0.0], "values": [1.0, 1.0]})
        with pytest.raises(ValueError):
            Modulation("table", {"ts": [0.0, 1.0], "values": [1.0, -1.0]})

    def test_switch_off_time(self):
        m = Modulation("table", {"ts": [0.0, 1.0, 2.0, 3.0], "values": [1.0, 1.0, 0.0, 0.0]})
        assert m.switch_off_time() == pytest.approx(2.0)
        assert Modulation("table", {"ts": [0.0, 1.0], "values": [1.0, 1.0]}).switch_off_time() is None


class TestModulationSerialization:
    @pytest.mark.parametrize(
        "mod",
        [
            Modulation.constant(0.5),
            Modulation("box", {"t_on": 1.0, "t_off": 4.0, "rise_time": 0.2, "amplitude": 1.5}),
            Modulation("sigmoid_off", {"t_mid": 3.0, "width": 0.4}),
            Modulation("table", {"ts": [0.0, 1.0], "values": [1.0, 0.0]}),
        ],
    )
    def test_roundtrip(self, mod):
        again = Modulation.from_dict(mod.to_dict())
        assert again.kind == mod.kind
        ts = np.linspace(0.0, 5.0, 23)
        assert np.allclose(np.asarray(again(ts)), np.asarray(mod(ts)))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Modulation("ramp", {})


class TestProtocol:
    def _proto(self):
        return Protocol(
            f_o=Modulation.constant(1.0),
            f_oe=Modulation("sigmoid_off", {"t_mid": 6.0, "width": 0.5}),
            variant="sigma_z",
            omega0=-2.0,
            t_end=12.0,
        )

    def test_roundtrip(self):
        p = self._proto()
        again = Protocol.from_dict(p.to_dict())
        assert again.variant == "sigma_z"
        assert again.omega0 == -2.0
        assert again.t_end == 12.0
        ts = np.linspace(0, 12, 7)
        assert np.allclose(np.asarray(again.f_oe(ts)), np.asarray(p.f_oe(ts)))

    def test_signed_splitting_allowed(self):
        assert self._proto().omega0 < 0

    def test_validation(self):
        with pytest.raises(ValueError):
            Protocol(f_o=Modulation.constant(), f_oe=Modulation.constant(), variant="sigma_y")
        with pytest.raises(ValueError):
            Protocol(f_o=Modulation.constant(), f_oe=Modulation.constant(), t_end=0.0)
