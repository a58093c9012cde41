"""Witnesses that U^(q) is neither universally degradable nor anti-degradable."""
