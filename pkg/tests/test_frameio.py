import numpy as np
import pytest

from etfspectra import frameio
from etfspectra import frames as fr


@pytest.mark.parametrize("family,params", [
    ("dss", {"n": 11}),
    ("real_paley", {"q": 5}),
    ("gaussian_iid", {"n": 12, "m": 6, "seed": 4}),
])
def test_round_trip(tmp_path, family, params):
    F = fr.construct(family, **params)
    path = tmp_path / "frame.json"
    frameio.save_frame(F, path)
    G = frameio.load_frame(path)
    assert G.family == F.family
    assert (G.m, G.n) == (F.m, F.n)
    assert G.is_complex == F.is_complex
    assert np.array_equal(G.entries, F.entries)


def test_bytes_deterministic(tmp_path):
    F = fr.construct_dss(7)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    frameio.save_frame(F, p1)
    frameio.save_frame(F, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_rejects_foreign_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"format": "something-else"}')
    with pytest.raises(ValueError):
        frameio.load_frame(path)
