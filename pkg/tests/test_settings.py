"""
Unit tests for SettingsFinder.

Tests the priority order of the settings sources and the parsing of
each value.
"""

import os
import shutil
import tempfile
import unittest

from gevreyflow.settings import (
    Settings,
    SettingsError,
    SettingsFinder,
    parse_window,
)


class TestSettingsFinder(unittest.TestCase):
    """Test cases for SettingsFinder."""

    def setUp(self):
        """Set up a scratch directory for .env files."""
        self.temp_dir = tempfile.mkdtemp()
        self.env_path = os.path.join(self.temp_dir, ".env")

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def write_env(self, text):
        with open(self.env_path, "w", encoding="utf-8") as f:
            f.write(text)

    def test_defaults(self):
        """No sources gives the built-in defaults."""
        settings = SettingsFinder.detect_config(env_path="/nonexistent/.env", environ={})
        self.assertEqual(settings, Settings())
        self.assertEqual(settings.rel_tol, 1e-10)
        self.assertEqual(settings.mode, "abs_at_origin")
        self.assertIsNone(settings.window)
        self.assertFalse(settings.strict)

    def test_env_file(self):
        """Values are read from the .env file."""
        self.write_env("GEVREYFLOW_REL_TOL=1e-8\nGEVREYFLOW_WINDOW=5:15\nGEVREYFLOW_STRICT=yes\n")
        settings = SettingsFinder.detect_config(env_path=self.env_path, environ={})
        self.assertEqual(settings.rel_tol, 1e-8)
        self.assertEqual(settings.window, (5, 15))
        self.assertTrue(settings.strict)

    def test_env_file_does_not_touch_environment(self):
        self.write_env("GEVREYFLOW_MODE=max_coeff\n")
        SettingsFinder.detect_config(env_path=self.env_path, environ={})
        self.assertNotIn("GEVREYFLOW_MODE", os.environ)

    def test_environment_beats_env_file(self):
        self.write_env("GEVREYFLOW_MODE=max_coeff\nGEVREYFLOW_MAX_SUBDIV=10\n")
        settings = SettingsFinder.detect_config(
            env_path=self.env_path, environ={"GEVREYFLOW_MODE": "at_origin"}
        )
        self.assertEqual(settings.mode, "at_origin")
        self.assertEqual(settings.max_subdiv, 10)

    def test_overrides_beat_everything(self):
        self.write_env("GEVREYFLOW_REL_TOL=1e-6\n")
        settings = SettingsFinder.detect_config(
            env_path=self.env_path,
            environ={"GEVREYFLOW_REL_TOL": "1e-7"},
            overrides={"rel_tol": 1e-9, "mode": None},
        )
        self.assertEqual(settings.rel_tol, 1e-9)
        self.assertEqual(settings.mode, "abs_at_origin")

    def test_invalid_value_names_its_source(self):
        self.write_env("GEVREYFLOW_MAX_SUBDIV=zero\n")
        with self.assertRaises(SettingsError) as ctx:
            SettingsFinder.detect_config(env_path=self.env_path, environ={})
        self.assertIn("max_subdiv", str(ctx.exception))
        self.assertIn(".env file", str(ctx.exception))

    def test_invalid_mode(self):
        with self.assertRaises(SettingsError):
            SettingsFinder.detect_config(env_path=None, environ={"GEVREYFLOW_MODE": "sup_norm"})

    def test_every_norm_mode_is_accepted(self):
        from gevreyflow.gevrey import NORM_MODES

        for mode in NORM_MODES:
            settings = SettingsFinder.detect_config(env_path=None, environ={"GEVREYFLOW_MODE": mode})
            self.assertEqual(settings.mode, mode)
        with self.assertRaises(SettingsError) as ctx:
            SettingsFinder.detect_config(env_path=None, environ={"GEVREYFLOW_MODE": "sup_norm"})
        self.assertIn(", ".join(NORM_MODES), str(ctx.exception))

    def test_invalid_boolean(self):
        with self.assertRaises(SettingsError):
            SettingsFinder.detect_config(env_path=None, environ={"GEVREYFLOW_STRICT": "maybe"})

    def test_unknown_override(self):
        with self.assertRaises(SettingsError):
            SettingsFinder.detect_config(env_path=None, environ={}, overrides={"colour": "blue"})

    def test_verbose_reports_sources(self):
        """verbose names where each value came from."""
        import io
        from contextlib import redirect_stderr

        self.write_env("GEVREYFLOW_WINDOW=2:6\n")
        buffer = io.StringIO()
        with redirect_stderr(buffer):
            SettingsFinder.detect_config(env_path=self.env_path, environ={}, verbose=True)
        self.assertIn("window = (2, 6)", buffer.getvalue())

    def test_parse_window(self):
        self.assertEqual(parse_window("3:9"), (3, 9))
        for text in ("3", "a:b", "9:3"):
            with self.assertRaises(SettingsError):
                parse_window(text)


if __name__ == "__main__":
    unittest.main()
