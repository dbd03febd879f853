"""Quaternion color edge detection: a cascaded ensemble of a gray-axis
rotation operator and a PCA-gradient Canny stage, with Sobel/Canny
baselines, PNM and BSDS ``.seg`` I/O, and pixel-level evaluation."""

__version__ = "0.1.0"

from .baselines import classic_canny, sobel_edges
from .bsds import LabelGrid, boundary_mask, load_manifest, parse_seg
from .canny import EdgeMap, HysteresisParams, hysteresis, non_max_suppress, sobel_gradients
from .cec import build_masks, combined_modulus, modulus_maps, quaternion_convolve
from .ensemble import PipelineConfig, run_pipeline
from .errors import CecError, InvalidArgumentError, NumericError, ParseError
from .evaluation import confusion, metrics
from .image import RasterImage, decode_pnm, encode_pgm, read_image, to_grayscale, to_quaternion_image
from .pca import fit_pca, jacobi_eig, project
from .quaternion import Quaternion, qconj, qmul, qnorm, rotation_operator, sandwich_rotate

__all__ = [
    "CecError", "InvalidArgumentError", "NumericError", "ParseError",
    "Quaternion", "qmul", "qconj", "qnorm", "rotation_operator", "sandwich_rotate",
    "RasterImage", "decode_pnm", "encode_pgm", "read_image", "to_grayscale", "to_quaternion_image",
    "build_masks", "quaternion_convolve", "modulus_maps", "combined_modulus",
    "fit_pca", "jacobi_eig", "project",
    "EdgeMap", "HysteresisParams", "hysteresis", "non_max_suppress", "sobel_gradients",
    "PipelineConfig", "run_pipeline", "classic_canny", "sobel_edges",
    "confusion", "metrics", "LabelGrid", "parse_seg", "boundary_mask", "load_manifest",
]
