"""Sliced Wasserstein distances, invertible density embeddings and kernels."""
from .density import (
    Cdf1D,
    DensityError,
    DiscreteDensity1D,
    DiscreteDensity2D,
    Grid1D,
    cdf,
    normalize,
    normalize_1d,
    normalize_2d,
    quantile,
)
from .kernels import (
    KERNEL_KINDS,
    EmbeddedDataset,
    GramMatrix,
    KernelError,
    KernelSpec,
    certify_cnd,
    certify_pd,
    embed_dataset,
    gram,
    kernel_matrix,
    sw_gaussian,
    sw_polynomial,
)
from .radon import AngleSet, RadonError, SlicedRepresentation, radon_forward, radon_inverse
from .sliced import (
    EmbeddingError,
    FeatureVector,
    Template,
    make_template,
    pairwise_sw2,
    phi_embed,
    phi_invert,
    sw_distance,
)
from .transport import (
    TransportError,
    TransportMap1D,
    psi_embed,
    psi_invert,
    transport_map,
    wasserstein2_1d,
)

__version__ = "0.1.0"
