"""Bundled scenario presets (INI files)."""
