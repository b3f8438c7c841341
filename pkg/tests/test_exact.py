import math

import pytest

from conetime.errors import AngleOutOfRange, FormatError, InexactAngle
from conetime.exact import ExactAngle, angle_value, parse_angle, require_exact


@pytest.mark.parametrize(
    "text, value",
    [
        ("pi", math.pi),
        ("2pi", 2 * math.pi),
        ("pi/3", math.pi / 3),
        ("1/3pi", math.pi / 3),
        ("3/7pi", 3 * math.pi / 7),
    ],
)
def test_parse_exact_forms(text, value):
    angle = parse_angle(text)
    assert isinstance(angle, ExactAngle)
    assert angle.value == pytest.approx(value, rel=1e-15)


def test_parse_float_form():
    assert parse_angle("1.25") == 1.25
    assert parse_angle("2") == 2.0


def test_parse_rejects_garbage():
    with pytest.raises(FormatError):
        parse_angle("about tau")


def test_angle_value_and_require_exact():
    exact = ExactAngle.rational_pi(1, 2)
    assert angle_value(exact) == pytest.approx(math.pi / 2)
    assert angle_value(0.75) == 0.75
    assert require_exact(exact) is exact
    with pytest.raises(InexactAngle):
        require_exact(0.75)


def test_nonpositive_angles_rejected():
    with pytest.raises(AngleOutOfRange):
        ExactAngle.rational_pi(-1, 3)
    with pytest.raises(AngleOutOfRange):
        ExactAngle.irrational_pi(0.0)
    with pytest.raises(AngleOutOfRange):
        ExactAngle.radians(0)
