import os
import pathlib

import pytest

CORPUS = pathlib.Path(os.environ.get("CIRCLET_CORPUS", pathlib.Path(__file__).resolve().parents[2] / "corpus"))


@pytest.fixture
def spec():
    return lambda name: (CORPUS / f"{name}.cspec").read_text()


@pytest.fixture
def script():
    return lambda name: (CORPUS / name).read_text()
