"""Plot script templates."""
