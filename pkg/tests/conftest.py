from pathlib import Path

import pytest

from oncecount import Event, intern_symbol

DATA = Path(__file__).parent / "data"


def events(spec: str) -> list[Event]:
    """``"A1 B2 A4"`` -> events; single-letter symbols followed by a timestamp."""
    return [Event(intern_symbol(tok[0]), int(tok[1:])) for tok in spec.split()]


@pytest.fixture
def data_dir() -> Path:
    return DATA
