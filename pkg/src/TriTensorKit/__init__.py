r"""`TriTensorKit` is a package for exact computations with tensors of format (3,3,4) and the cubic surfaces they define.

A (3,3,4) tensor $B \in U^\vee \otimes W \otimes V^\vee$ with $\dim U = \dim W = 3$ and $\dim V = 4$ is at the same time a
$3\times 3$ matrix of linear forms on $\mathbb{P}^3$, whose determinant is a cubic surface, and a $3\times 4$ matrix of
linear forms on a projective plane, whose maximal minors are the cubics through six points.

All arithmetic is exact: scalars are rationals or residues modulo a prime, matrices and polynomials are handled by the
exact domains of `sympy`. Exhaustive scans of projective spaces over $\mathbb{F}_p$ are vectorised with `numpy`.

## What is included

* [tensor][TriTensorKit.tensor]: the [TriTensor][TriTensorKit.tensor.TriTensor] class, slices, the determinantal cubic
  and the trivial, cross-product and reversing involutions.
* [hilbert_burch][TriTensorKit.hilbert_burch]: from six points to a tensor and back.
* [schur][TriTensorKit.schur]: the Schur quadric, the double six and their orthogonality.
* [eagon_northcott][TriTensorKit.eagon_northcott]: Eagon-Northcott type complexes, checked symbolically.
* [cohomology][TriTensorKit.cohomology]: the rank-6 kernel bundle on $\mathbb{P}^3$, its cohomology table and the
  degeneracy locus of its sections.
* [cremona][TriTensorKit.cremona]: Cremona reduction of divisor classes on the blow-up of six points.
* [report][TriTensorKit.report]: full analysis reports and verification suites, also available through the
  `tritensor` command.

## Fields

Every object carries a [FieldTag][TriTensorKit.exact.FieldTag]: `"Q"` for the rationals or `"Fp:<p>"` for a prime
field. Mixing fields in one operation raises a [FieldMismatchError][TriTensorKit.exact.FieldMismatchError]; rational
data is moved to a prime field explicitly, e.g. with [TriTensor.reduce_mod][TriTensorKit.tensor.TriTensor.reduce_mod].

## Example

```python
from TriTensorKit import Analyzer, fixture
report = Analyzer(timing=False).analyze(fixture("cayley6"))
report["summary"]["ok"]
```

## Logging

All modules log to the `"TriTensorKit"` logger and never install handlers themselves; the command line interface
logs to standard error and writes only JSON to standard output.
"""

from .cohomology import KernelBundleModel
from .cremona import DivisorClass, reduce
from .exact import RATIONALS, FieldTag, TriTensorError
from .generators import GeneratorSpec, fixture
from .hilbert_burch import PlanePoint, base_points, points_to_tensor
from .report import Analyzer, verify
from .schur import double_six, schur_quadric
from .tensor import TriTensor, cross_product_involution, det_cubic, main_assumption

__all__ = [
    "RATIONALS",
    "Analyzer",
    "DivisorClass",
    "FieldTag",
    "GeneratorSpec",
    "KernelBundleModel",
    "PlanePoint",
    "TriTensor",
    "TriTensorError",
    "base_points",
    "cross_product_involution",
    "det_cubic",
    "double_six",
    "fixture",
    "main_assumption",
    "points_to_tensor",
    "reduce",
    "schur_quadric",
    "verify",
]
