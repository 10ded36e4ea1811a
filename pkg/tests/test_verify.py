import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from esp import verify
from esp.catalog import FamilyId, Reading
from esp.errors import ParameterError
from esp.verify import SpectrumReport, SpectrumRow

finite = st.floats(-1e6, 1e6, allow_nan=False)
maybe = st.one_of(st.none(), finite)


@given(
    rows=st.lists(
        st.builds(SpectrumRow, m=st.integers(0, 20), E_analytic=finite, E_numeric_fd=maybe,
                  E_numeric_numerov=maybe, abs_err=maybe, rel_err=maybe,
                  nodes_expected=st.one_of(st.none(), st.integers(0, 20)),
                  nodes_found=st.one_of(st.none(), st.integers(0, 20)),
                  norm_dev=maybe, residual_max=maybe),
        max_size=5,
    ),
    passed=st.booleans(),
)
def test_report_json_round_trip(rows, passed):
    rep = SpectrumReport("ext-scarf1", {"A": 2.0, "B": 0.5}, None, rows, passed,
                         {"spectrum_rel": 1e-5})
    text = rep.to_json()
    again = SpectrumReport.from_json(text)
    assert again == rep
    assert again.to_json() == text


def test_rows_keep_twelve_digits():
    row = SpectrumRow(0, math.pi, None, None, None, None, None, None, None, math.inf)
    assert row.E_analytic == float(f"{math.pi:.12g}")
    assert row.residual_max is None


def test_report_schema_keys():
    rep = verify.verify_family(FamilyId.EXT_SCARF1, {"A": 2.0, "B": 0.5}, 2)
    d = json.loads(rep.to_json())
    assert {"family", "params", "resolved_reading", "rows", "pass", "tolerances"} <= set(d)
    assert set(d["rows"][0]) == {
        "m", "E_analytic", "E_numeric_fd", "E_numeric_numerov", "abs_err", "rel_err",
        "nodes_expected", "nodes_found", "norm_dev", "residual_max",
    }
    assert d["pass"] is True and d["resolved_reading"] is None


def test_as_printed_reading_fails_honestly():
    rep = verify.verify_family(FamilyId.EXT_MORSE,
                               {"p2": 1.0, "A": 4.5, "reading": Reading.AS_PRINTED}, 2)
    assert not rep.passed
    assert rep.resolved_reading == "corrected"
    assert any("selects corrected" in e for e in rep.errors)


def test_tight_tolerance_fails():
    tols = verify.Tolerances(spectrum_rel=1e-14, spectrum_abs=1e-16)
    rep = verify.verify_family(FamilyId.EXT_OSCILLATOR, {"omega": 2.0, "ell": 0, "dim": 3}, 2,
                               tols=tols)
    assert not rep.passed


def test_levels_beyond_range():
    with pytest.raises(ParameterError):
        verify.verify_family(FamilyId.EXT_MORSE, {"p2": 1.0, "A": 4.5}, 5)
    with pytest.raises(ParameterError):
        verify.verify_family(FamilyId.EXT_SCARF1, {"A": 2.0, "B": 0.5}, 0)


def test_reading_resolution():
    res = verify.resolve_morse_reading({"p2": 1.0, "A": 4.5})
    assert res.reading is Reading.CORRECTED
    assert res.deviations["as_printed"] > 1e-2
    with pytest.raises(ParameterError):
        verify.resolve_reading(FamilyId.EXT_SCARF1, {"A": 2.0, "B": 0.5})


@pytest.mark.parametrize("fid, params", [
    (FamilyId.EXT_OSCILLATOR, {"omega": 2.0, "ell": 1, "dim": 3}),
    (FamilyId.EXT_SCARF1, {"A": 2.0, "B": 0.5}),
    (FamilyId.STD_SCARF1, {"a": 2.0, "b": 0.5, "alpha": 1.0}),
])
def test_orthonormality(fid, params):
    rep = verify.verify_orthonormality(fid, params, 4)
    assert rep.matrix.shape == (5, 5)
    assert rep.passed()
    np.testing.assert_allclose(rep.matrix, rep.matrix.T)


def test_orthonormality_single_level_and_skip():
    rep = verify.verify_orthonormality(FamilyId.EXT_SCARF1, {"A": 2.0, "B": 0.5}, 0)
    assert rep.matrix.shape == (1, 1) and abs(rep.matrix[0, 0] - 1) < 1e-6
    skip = verify.verify_orthonormality(FamilyId.EXT_MORSE, {"p2": 1.0, "A": 4.5}, 2)
    assert skip.matrix is None and "level" in skip.skipped_reason and not skip.passed()


def test_isospectral_scarf_with_scale():
    rep = verify.verify_isospectral(FamilyId.EXT_SCARF1, {"A": 3.0, "B": 1.0, "p": 2.0}, 4)
    assert rep.passed and rep.ext_analytic == rep.std_analytic
    with pytest.raises(ParameterError):
        verify.verify_isospectral(FamilyId.EXT_MORSE, {"p2": 1.0, "A": 4.5}, 2)


def test_validation_matrix_contents():
    fams = {e.family for e in verify.VALIDATION_MATRIX}
    assert fams == {FamilyId.EXT_OSCILLATOR, FamilyId.EXT_MORSE, FamilyId.EXT_SCARF1,
                    FamilyId.EXT_ROSEN_MORSE}
    dims = sorted({e.params["dim"] for e in verify.VALIDATION_MATRIX
                   if e.family is FamilyId.EXT_OSCILLATOR})
    assert dims == [2, 3, 5]


@pytest.mark.parametrize("entry", verify.VALIDATION_MATRIX,
                         ids=lambda e: f"{e.family.value}-{'-'.join(map(str, e.params.values()))}")
def test_validation_matrix_passes(entry):
    rep = verify.verify_family(entry.family, entry.params, entry.levels)
    assert rep.passed, rep.errors
