"""Tests for thomason-lab."""
