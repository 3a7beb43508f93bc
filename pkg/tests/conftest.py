import os

import pytest

from app import create_app
from app.config import Config
from core import relmonad, syntax
from core.report import Budget

SIGNATURE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "signatures")


@pytest.fixture
def lam_app_sig():
    return syntax.BindingSignature.elements(("app", (0, 0)), ("lam", (1,)))


@pytest.fixture
def two_sorted_sigs():
    return syntax.load_signatures(os.path.join(SIGNATURE_DIR, "two_sorted.sig"))


@pytest.fixture
def vars_inst():
    return relmonad.variables_instance()


@pytest.fixture
def exc_inst():
    return relmonad.exception_instance()


@pytest.fixture
def unit_inst():
    return relmonad.unit_instance()


@pytest.fixture
def free_inst(lam_app_sig):
    return relmonad.free_monad(lam_app_sig, name="free:lam_app.sig")


@pytest.fixture
def two_sorted_inst(two_sorted_sigs):
    el_sig, _ = two_sorted_sigs
    return relmonad.free_monad(el_sig, name="free:two_sorted.sig")


@pytest.fixture
def budget():
    return Budget(max_len=2, samples=40, per_hom=8, limit=20000, max_size=6, seed=3)


@pytest.fixture
def report_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(Config, "REPORT_DIR", str(tmp_path))
    return tmp_path


class TestingConfig(Config):
    TESTING = True
    RATELIMIT_ENABLED = False


@pytest.fixture
def app(report_dir):
    return create_app(TestingConfig)


@pytest.fixture
def client(app):
    return app.test_client()
