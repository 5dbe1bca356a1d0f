import json
import math
from fractions import Fraction

import pandas as pd

from report_generator import SCHEMA_VERSION, ReportGenerator, table_frame, to_jsonable
from scalars import FormalScalar

SAMPLE = {
    "command": "numeric",
    "which": "appendixF",
    "passed": False,
    "parameters": {"n": 2, "L": 1.0},
    "checks": [{"name": "differences decrease", "passed": False, "detail": "0.1 then 0.2"}],
    "tables": {"convergence": [{"epsilon": 0.01, "value": 0.5}, {"epsilon": 0.001, "value": 0.55, "flagged": True}]},
    "failure": "successive differences do not decrease",
}


def test_jsonable_values():
    assert to_jsonable(Fraction(3, 6)) == "1/2"
    assert to_jsonable(complex(1, -2)) == {"re": 1.0, "im": -2.0}
    assert to_jsonable(math.inf) == "inf"
    assert to_jsonable(FormalScalar.zeta(3)) == [{"coeff": "1/1", "twopii": 0, "zeta": [3]}]
    assert to_jsonable({1: (True, 2)}) == {"1": [True, 2]}


def test_table_frame_keeps_first_seen_columns():
    frame = table_frame(SAMPLE["tables"]["convergence"])
    assert isinstance(frame, pd.DataFrame)
    assert list(frame.columns) == ["epsilon", "value", "flagged"]


def test_json_is_deterministic():
    generator = ReportGenerator()
    text = generator.render_json(SAMPLE)
    assert text == generator.render_json(dict(reversed(list(SAMPLE.items()))))
    assert text.endswith("\n")
    assert json.loads(text)["schema"] == SCHEMA_VERSION


def test_markdown_report(tmp_path):
    generator = ReportGenerator(output_dir=str(tmp_path))
    path = generator.generate_markdown(SAMPLE)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    assert path.endswith("numeric_appendixF.md")
    assert "❌ FAIL" in text
    assert "| epsilon | value | flagged |" in text
    assert "successive differences do not decrease" in text


def test_pdf_report(tmp_path):
    path = ReportGenerator().generate_pdf(SAMPLE, str(tmp_path / "report.pdf"))
    with open(path, "rb") as f:
        assert f.read(4) == b"%PDF"
