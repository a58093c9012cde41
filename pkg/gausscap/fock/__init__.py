"""Truncated Fock-space oracle and closed-form output spectra of U^(q)."""
