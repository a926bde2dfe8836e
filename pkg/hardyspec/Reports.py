'''
Report models emitted by the cli: operator runs, verification checks and Bergman
inequality evaluations.
'''

import logging
import math
from typing import Literal

from pydantic import BaseModel, Field, field_validator

from hardyspec.spectral import FieldHeader
from hardyspec.utils.yaml_utils import dump_str

logger = logging.getLogger(__name__)


def _header_dict(header):
    return {'n': header.n, 'dims': header.dims, 'extent': header.extent}


class OperatorReport(BaseModel):
    '''What an operator command did to its input, with its residuals'''

    operator: str
    input_header: FieldHeader
    output_header: FieldHeader
    dc_policy: str = 'singular multipliers vanish at DC; chi_+-(0) = 1/2'
    residuals: dict[str, float] = Field(default_factory=dict)

    @field_validator('residuals')
    @classmethod
    def _finite_nonnegative(cls, residuals):
        for name, value in residuals.items():
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f'Residual {name} must be finite and >= 0, got {value}')
        return residuals

    def to_yaml(self):
        return dump_str(
            {
                'operator': self.operator,
                'input': _header_dict(self.input_header),
                'output': _header_dict(self.output_header),
                'dc_policy': self.dc_policy,
                'residuals': dict(self.residuals),
            }
        )


class CheckResult(BaseModel):
    '''One verified property: measured value against its tolerance'''

    name: str
    criterion: int  # acceptance criterion the check belongs to
    measured: float
    tolerance: float
    kind: Literal['max', 'min'] = 'max'  # tolerance is an upper or a lower bound
    passed: bool
    detail: str = ''

    @classmethod
    def compare(cls, name, criterion, measured, tolerance, kind='max', detail=''):
        '''Check measured against its bound; NaN never passes'''
        measured = float(measured)
        passed = measured <= tolerance if kind == 'max' else measured >= tolerance
        return cls(
            name=name,
            criterion=criterion,
            measured=measured,
            tolerance=float(tolerance),
            kind=kind,
            passed=bool(passed),
            detail=detail,
        )


class VerifyReport(BaseModel):
    profile: str
    seed: int
    tolerance_version: int
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def all_passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def machine_lines(self):
        '''Line-oriented key=value summary; identical across runs with the same seed'''
        lines = [
            f'profile={self.profile}',
            f'seed={self.seed}',
            f'tolerance_version={self.tolerance_version}',
        ]
        lines += [
            f'check={c.name} criterion={c.criterion} measured={c.measured:.6e} '
            f'{c.kind}={c.tolerance:.3e} status={"pass" if c.passed else "FAIL"}'
            for c in self.checks
        ]
        lines.append(f'result={"pass" if self.all_passed else "FAIL"}')
        return '\n'.join(lines) + '\n'

    def to_yaml(self):
        return dump_str(
            {
                'profile': self.profile,
                'seed': self.seed,
                'tolerance_version': self.tolerance_version,
                'passed': sum(c.passed for c in self.checks),
                'failed': [c.name for c in self.failures()],
                'checks': [c.model_dump() for c in self.checks],
            }
        )


class BergmanReport(BaseModel):
    '''Both sides of the weighted spectral norm inequality for one density'''

    density: str
    p: float
    sup_form: bool
    weighted_spectral_norm: float
    bergman_norm: float
    ratio: float  # left side / right side, <= 1 when the inequality holds
    truncation_bound: float
    x0_range: tuple[float, float]
    x0_nodes: int

    def to_yaml(self):
        return dump_str(self.model_dump())
