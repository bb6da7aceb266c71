import numpy as np
import pytest

from swkernels import io
from swkernels.density import DiscreteDensity1D, Grid1D, normalize_1d, normalize_2d


def test_1d_density_round_trip(tmp_path, rng):
    d = normalize_1d(rng.uniform(size=20), Grid1D(-1.5, 0.1, 20))
    io.write_density(tmp_path / "d.csv", d)
    back = io.read_density(tmp_path / "d.csv", epsilon=0.0)
    assert isinstance(back, DiscreteDensity1D)
    np.testing.assert_allclose(back.values, d.values, rtol=1e-13)
    assert back.grid.same_as(d.grid)


def test_2d_density_round_trip_is_byte_stable(tmp_path, rng):
    d = normalize_2d(rng.uniform(size=(3, 5)), 0.5)
    io.write_density(tmp_path / "a.csv", d)
    back = io.read_density(tmp_path / "a.csv", epsilon=0.0)
    io.write_density(tmp_path / "b.csv", back)
    np.testing.assert_allclose(back.values, d.values, rtol=1e-13)
    assert back.pixel_size == 0.5


def test_raw_values_are_normalized(tmp_path):
    (tmp_path / "r.csv").write_text("# grid origin=0 spacing=0.5\n1\n3\n")
    d = io.read_density(tmp_path / "r.csv", epsilon=0.0)
    np.testing.assert_allclose(d.masses, [0.25, 0.75])


@pytest.mark.parametrize(
    "text",
    [
        "1,2\n3,4\n",
        "# grid rows=2 cols=3 pixel=1\n1,2\n3,4\n",
        "# grid rows=2 cols=2 pixel=1\n1,2\n3\n",
        "# grid origin=0\n1\n2\n",
        "# grid origin=0 spacing=1\n1,2\n3,4\n",
        "# phi L=1 T=2 t_origin=0 t_spacing=1\n1,2\n",
        "# grid rows=x cols=2 pixel=1\n1,2\n",
        "# grid rows=1 cols=2 pixel=1\n1,abc\n",
    ],
)
def test_malformed_files(tmp_path, text):
    (tmp_path / "bad.csv").write_text(text)
    with pytest.raises(io.FormatError):
        io.read_density(tmp_path / "bad.csv")


def test_format_float_is_exact():
    x = 0.1 + 0.2
    assert float(io.format_float(x)) == x
