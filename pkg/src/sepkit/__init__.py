"""Constructive separation of analytic sets by explicit codes."""
