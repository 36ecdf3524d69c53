"""Exterior-calculus verification toolkit for Calabi-Yau structures on
canonical line bundles of Kahler-Einstein models, and for special
Lagrangian lifts of minimal Lagrangian submanifolds."""

from .forms import (
    AlternatingForm,
    FormField,
    SmoothMap,
    wedge,
    exterior_derivative,
    exterior_derivative_field,
    pullback,
    pullback_field,
    metric_dual,
    sharp,
    form_norm,
    evaluate_form,
)

__version__ = "0.1.0"
