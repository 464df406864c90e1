"""Exact completed-homology toolkit over polycyclic group rings."""

from .advisor import advise, obstruction_report
from .complexes import (
    FreeComplex,
    NovikovComplex,
    base_change_novikov,
    duality_check,
    euler_characteristic,
    fingerprint,
    fox_derivative,
    homology_verdict,
    mapping_torus,
    parse_complex,
    presentation_complex,
    product_with_sphere,
    reduce_complex,
    verdict,
)
from .groupring import RingElement, parse_ring_expr
from .novikov import NovikovMatrix, NovikovSeries, embed, invert_id_minus
from .pcgroup import (
    Character,
    PcPresentation,
    character_check,
    evaluate_character,
    parse_presentation,
)
from .sigma import (
    Representation,
    Resolution,
    finish_executor,
    tensor_with_rep,
    verify_homotopy,
    verify_sigma_witness,
)

__version__ = "0.1.0"
