"""Table output."""
