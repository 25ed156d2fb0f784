"""Modules, quiver representations, induction, the folding functor and Auslander-Reiten translates."""
