"""Robust day-ahead microgrid scheduling toolkit."""
