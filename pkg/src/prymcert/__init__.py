"""prymcert: exact-arithmetic certification of an eigenspace elimination on (P^1)^4."""

__version__ = "0.1.0"
