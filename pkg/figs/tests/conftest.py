import pytest

from mgtfourier.cli import main as mgt_main


@pytest.fixture(scope="session")
def golden_dir(tmp_path_factory):
    """Scan CSVs produced by the companion CLI, shared across tests."""
    d = tmp_path_factory.mktemp("golden")
    code = mgt_main([
        "threshold", "--grid-min", "0.1", "--grid-max", "10",
        "--grid-steps", "40", "--workers", "1",
        "--out", str(d / "threshold.csv"),
    ])
    assert code == 0
    code = mgt_main([
        "decay", "--grid-min", "1.2", "--grid-max", "3.0",
        "--grid-steps", "60", "--grid-scale", "lin", "--workers", "1",
        "--out", str(d / "decay.csv"),
    ])
    assert code == 0
    return d
