import json
import logging

import pytest
from pydantic import ValidationError

from plankton_dynamics.utils.config import Config, NumericalTolerances, OrbitProtocol
from plankton_dynamics.utils.errors import (
    ConfigFileError,
    ExportError,
    InvalidParametersError,
    NumericalFailureError,
    PlanktonError,
)
from plankton_dynamics.utils.logger import PACKAGE_LOGGER, StructuredLogger, configure_logging


class _Collect(logging.Handler):
    def __init__(self):
        super().__init__()
        self.messages = []

    def emit(self, record):
        self.messages.append(record.getMessage())


@pytest.fixture
def captured():
    package = logging.getLogger(PACKAGE_LOGGER)
    StructuredLogger(f'{PACKAGE_LOGGER}.scratch')
    handler = _Collect()
    level = package.level
    package.addHandler(handler)
    yield handler
    package.removeHandler(handler)
    package.setLevel(level)


class TestStructuredLogger:
    def test_entry_fields(self):
        entry = StructuredLogger('plankton_dynamics.analysis.fixed_points')._build_log_entry(
            'INFO', 'Counted interior fixed points', count=3)
        assert entry['level'] == 'INFO'
        assert entry['message'] == 'Counted interior fixed points'
        assert entry['component'] == 'fixed_points'
        assert entry['service'] == 'plankton-dynamics'
        assert entry['count'] == 3
        assert 'timestamp' in entry

    def test_emits_json(self, captured):
        configure_logging('info')
        StructuredLogger(f'{PACKAGE_LOGGER}.scratch').info('Sweep finished', columns=50)
        (message,) = captured.messages
        entry = json.loads(message)
        assert entry['message'] == 'Sweep finished'
        assert entry['columns'] == 50

    def test_level_filters(self, captured):
        configure_logging('warning')
        scratch = StructuredLogger(f'{PACKAGE_LOGGER}.scratch')
        scratch.info('hidden')
        scratch.debug('hidden')
        scratch.warning('shown')
        assert [json.loads(m)['message'] for m in captured.messages] == ['shown']

    def test_error_fields(self, captured):
        scratch = StructuredLogger(f'{PACKAGE_LOGGER}.scratch')
        try:
            raise NumericalFailureError('no bracket')
        except NumericalFailureError as e:
            scratch.error('Root search failed', error=e, u_low=0.25)
        entry = json.loads(captured.messages[-1])
        assert entry['error_type'] == 'NumericalFailureError'
        assert entry['error_message'] == 'no bracket'
        assert 'NumericalFailureError' in entry['traceback']
        assert entry['u_low'] == 0.25

    def test_package_logger_does_not_propagate(self):
        StructuredLogger(f'{PACKAGE_LOGGER}.scratch')
        assert logging.getLogger(PACKAGE_LOGGER).propagate is False


class TestConfig:
    def test_default_tolerances(self, monkeypatch):
        for name in ('PLANKTON_EQUALITY_TOL', 'PLANKTON_BISECTION_XTOL', 'PLANKTON_BISECTION_MAXITER',
                     'PLANKTON_NS_GRID', 'PLANKTON_DIVERGENCE_BOUND'):
            monkeypatch.delenv(name, raising=False)
        tol = Config.get_tolerances()
        assert tol == NumericalTolerances()
        assert (tol.bisection_xtol, tol.bisection_maxiter, tol.ns_grid_points) == (1e-14, 200, 10_000)

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv('PLANKTON_NS_GRID', '2000')
        monkeypatch.setenv('PLANKTON_ORBIT_STEPS', '500')
        monkeypatch.setenv('PLANKTON_ORBIT_TRANSIENT', '100')
        assert Config.get_tolerances().ns_grid_points == 2000
        protocol = Config.get_orbit_protocol()
        assert (protocol.steps, protocol.transient) == (500, 100)

    def test_loose_bisection_rejected(self, monkeypatch):
        monkeypatch.setenv('PLANKTON_BISECTION_XTOL', '1e-8')
        with pytest.raises(ValidationError):
            Config.get_tolerances()

    def test_c02_form_from_environment(self, monkeypatch):
        monkeypatch.delenv('PLANKTON_NS_C02_FORM', raising=False)
        assert Config.get_c02_form() == 'reference'
        monkeypatch.setenv('PLANKTON_NS_C02_FORM', 'similarity')
        assert Config.get_c02_form() == 'similarity'

    def test_unknown_c02_form_rejected(self, monkeypatch):
        monkeypatch.setenv('PLANKTON_NS_C02_FORM', 'Reference ')
        with pytest.raises(InvalidParametersError, match='PLANKTON_NS_C02_FORM'):
            Config.get_c02_form()

    def test_protocol_validation(self):
        with pytest.raises(ValidationError):
            OrbitProtocol(steps=0)
        with pytest.raises(ValidationError):
            NumericalTolerances(ns_grid_points=10)


class TestErrors:
    def test_hierarchy(self):
        assert issubclass(InvalidParametersError, ValueError)
        assert issubclass(NumericalFailureError, ArithmeticError)
        for cls in (InvalidParametersError, ConfigFileError, NumericalFailureError, ExportError):
            assert issubclass(cls, PlanktonError)

    def test_config_file_error_message(self):
        error = ConfigFileError('run.cfg', 4, 'beta = x\n', "invalid value for 'beta'")
        assert str(error) == "run.cfg:4: invalid value for 'beta': 'beta = x'"
        assert error.line_number == 4
