"""ncgrade: a workbench for graded noncommutative algebras.

Exact (rational or prime-field) computation with degree-truncated Groebner
bases, graded algebra constructions (Veronese, quasi-Veronese, twists,
Koszul duals, section algebras), graded module homological algebra
(resolutions, Hom/Ext, matrix factorizations), and window-certified checks
for exceptional sequences and helices.
"""

__version__ = "0.1.0"
