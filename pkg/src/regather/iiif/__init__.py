from .imageapi import ImageRequest, Region, Size, build_image_uri, parse_image_uri
from .model import ImageServiceRef, PresentationResource, ValidationReport
from .parse import parse_presentation
from .serialize import presentation_json, serialize_presentation
from .validate import validate_presentation

__all__ = [
    "ImageRequest",
    "ImageServiceRef",
    "PresentationResource",
    "Region",
    "Size",
    "ValidationReport",
    "build_image_uri",
    "parse_image_uri",
    "parse_presentation",
    "presentation_json",
    "serialize_presentation",
    "validate_presentation",
]
