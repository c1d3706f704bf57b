from src.core.config import Settings, settings


def test_defaults():
    assert settings.APP_NAME == "Regmark"
    assert settings.SET_SIZE_CAP == 0
    assert settings.THEOREM_MAX_NODES == 6


def test_environment_override(monkeypatch):
    monkeypatch.setenv("REGMARK_BUDGET", "500")
    monkeypatch.setenv("REGMARK_REGRESSION_RANGE", "[0.5, 0.6]")
    fresh = Settings()
    assert fresh.BUDGET == 500
    assert fresh.REGRESSION_RANGE == (0.5, 0.6)


def test_prefix_is_required(monkeypatch):
    monkeypatch.setenv("BUDGET", "7")
    assert Settings().BUDGET == settings.BUDGET
