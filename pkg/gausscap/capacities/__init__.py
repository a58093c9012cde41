"""Single-letter capacity quantities, bounds and their optimizers."""
