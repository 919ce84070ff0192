"""Localization of Soergel diagrams, light leaves and intersection forms."""
