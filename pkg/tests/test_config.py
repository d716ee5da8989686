import pytest
from pydantic import ValidationError

from app.core.config import DEFAULT_TOLERANCES, Tolerances
from app.core.errors import EnumerationCapError, InstanceValidationError, VerificationFailedError


def test_default_tolerances(tolerances):
    assert tolerances is DEFAULT_TOLERANCES
    assert tolerances.verify_eps == 1e-6
    assert tolerances.drop_eps < tolerances.feasibility_eps < tolerances.verify_eps


def test_tolerances_must_be_positive():
    with pytest.raises(ValidationError):
        Tolerances(pivot_eps=0.0)


def test_tolerances_are_frozen(tolerances):
    with pytest.raises(ValidationError):
        tolerances.verify_eps = 1.0


def test_error_exit_codes():
    assert InstanceValidationError("bad", field="prior").exit_code == 2
    assert str(InstanceValidationError("bad", field="prior")) == "prior: bad"
    assert EnumerationCapError("net", 10, 5).exit_code == 3
    assert VerificationFailedError("x").exit_code == 4
