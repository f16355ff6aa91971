import logging

from src.config import Settings, configure_logging, get_budget


class TestConfig:
    """Test configuration management."""

    def test_settings_defaults(self, monkeypatch):
        """Test default settings values."""
        monkeypatch.delenv("KPN_BUDGET", raising=False)
        settings = Settings()
        assert settings.budget == 10**8
        assert settings.workers == 1
        assert settings.lp_max_elements == 8
        assert settings.max_reported_violations == 20
        assert settings.tolerance == 1e-9
        assert settings.output_format == "json"
        assert settings.log_level == "WARNING"

    def test_settings_from_env(self, monkeypatch):
        """Test loading settings from environment variables."""
        monkeypatch.setenv("KPN_BUDGET", "5000")
        monkeypatch.setenv("KPN_WORKERS", "4")
        monkeypatch.setenv("KPN_LP_MAX_ELEMENTS", "6")
        monkeypatch.setenv("kpn_output_format", "plain")

        settings = Settings()
        assert settings.budget == 5000
        assert settings.workers == 4
        assert settings.lp_max_elements == 6
        assert settings.output_format == "plain"

    def test_get_budget_override(self):
        """Test that an explicit budget wins over settings."""
        assert get_budget(123) == 123

    def test_get_budget_from_settings(self, monkeypatch):
        """Test budget fallback to the global settings."""
        from src import config

        monkeypatch.setattr(config.settings, "budget", 777)
        assert get_budget() == 777
        assert get_budget(None) == 777

    def test_configure_logging(self, monkeypatch):
        """Test logging setup accepts lowercase levels."""
        calls = {}
        monkeypatch.setattr(logging, "basicConfig", lambda **kw: calls.update(kw))
        configure_logging("debug")
        assert calls["level"] == "DEBUG"
