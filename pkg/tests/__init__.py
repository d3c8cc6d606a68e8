"""Test suite for the loggamma package."""
