"""Shared fixtures."""

import pytest

from fakedata import write_fake_run


@pytest.fixture
def fake_run(tmp_path):
    return write_fake_run(tmp_path)
