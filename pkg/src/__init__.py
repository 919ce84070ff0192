"""p-canonical basis engine."""
