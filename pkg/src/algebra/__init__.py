"""Coxeter groups, Hecke algebras and polynomial rings."""
