import numpy as np
import pytest
from pydantic import ValidationError

from hardyspec.Reports import BergmanReport, OperatorReport
from hardyspec.spectral import FieldHeader, Side
from hardyspec.utils.yaml_utils import dump_str, load_str


def test_operator_report_yaml():
    header = FieldHeader.cube(2, 16, length=2.0)
    report = OperatorReport(
        operator='hilbert', input_header=header, output_header=header, residuals={'involution': 1e-15}
    )
    data = load_str(report.to_yaml())
    assert data['input'] == {'n': 2, 'dims': [16, 16], 'extent': [2.0, 2.0]}
    assert data['residuals']['involution'] == 1e-15


@pytest.mark.parametrize('value', [-1.0, float('nan'), float('inf')])
def test_residuals_must_be_finite_and_nonnegative(value):
    header = FieldHeader.cube(1, 8)
    with pytest.raises(ValidationError):
        OperatorReport(operator='x', input_header=header, output_header=header, residuals={'r': value})


def test_bergman_report_round_trips_through_yaml():
    report = BergmanReport(
        density='single-mode',
        p=2.0,
        sup_form=False,
        weighted_spectral_norm=0.5,
        bergman_norm=0.5,
        ratio=1.0,
        truncation_bound=0.3,
        x0_range=(0.01, 1.5),
        x0_nodes=400,
    )
    assert BergmanReport(**load_str(report.to_yaml())) == report


def test_numpy_scalars_and_enums_dump_as_plain_yaml():
    text = dump_str({'a': np.float64(0.25), 'b': np.int64(3), 'c': np.bool_(True), 'd': Side.MINUS})
    assert load_str(text) == {'a': 0.25, 'b': 3, 'c': True, 'd': '-'}
