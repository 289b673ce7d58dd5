import json
import pathlib

import pytest

from qasida import meterdb

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def db():
    return meterdb.load()


@pytest.fixture(scope="session")
def gold():
    """The 20 bundled gold hemistiches: [{"meter": int, "text": str}]."""
    return json.loads((DATA / "gold_hemistiches.json").read_text("utf-8"))
