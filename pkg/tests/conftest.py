import pytest

from turingfam import corpus


@pytest.fixture
def load():
    return corpus.load


@pytest.fixture
def palindrome():
    return corpus.load("palindrome")


@pytest.fixture
def loop():
    return corpus.load("loop")


@pytest.fixture
def accept():
    return corpus.load("accept")
