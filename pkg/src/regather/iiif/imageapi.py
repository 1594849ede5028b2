"""Image API request URIs: {base}/{region}/{size}/{rotation}/{quality}.{format}.

Requests are parsed into a typed form and rebuilt bit-exact; build and
parse are inverse on canonical spellings.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidParameter, NotImageUri

QUALITIES = ("default", "color", "gray", "bitonal")
FORMATS = ("jpg", "png", "tif", "gif", "webp")


def _num(value):
    """Canonical spelling: integral values without a decimal point."""
    if float(value) == int(value):
        return str(int(value))
    return repr(float(value))


def _parse_number(text):
    try:
        if "." in text or "e" in text or "E" in text:
            return float(text)
        return int(text)
    except ValueError as exc:
        raise InvalidParameter(f"not a number: {text!r}") from exc


@dataclass(frozen=True)
class Region:
    kind: str  # full | square | pixel | pct
    x: float = 0
    y: float = 0
    w: float = 0
    h: float = 0

    @classmethod
    def full(cls):
        return cls("full")

    @classmethod
    def square(cls):
        return cls("square")

    @classmethod
    def pixels(cls, x, y, w, h):
        return cls("pixel", int(x), int(y), int(w), int(h))

    @classmethod
    def pct(cls, x, y, w, h):
        return cls("pct", x, y, w, h)

    def validate(self):
        if self.kind in ("full", "square"):
            return
        if self.kind == "pixel":
            if self.w <= 0 or self.h <= 0:
                raise InvalidParameter(f"region must have positive width and height: {self}")
            if self.x < 0 or self.y < 0:
                raise InvalidParameter(f"region origin must be non-negative: {self}")
        elif self.kind == "pct":
            if not (0 <= self.x < 100 and 0 <= self.y < 100):
                raise InvalidParameter(f"pct region origin must be in [0, 100): {self}")
            if not (0 < self.w <= 100 and 0 < self.h <= 100):
                raise InvalidParameter(f"pct region extent must be in (0, 100]: {self}")
        else:
            raise InvalidParameter(f"unknown region kind {self.kind!r}")

    def spell(self):
        if self.kind in ("full", "square"):
            return self.kind
        if self.kind == "pixel":
            return f"{int(self.x)},{int(self.y)},{int(self.w)},{int(self.h)}"
        return "pct:" + ",".join(_num(v) for v in (self.x, self.y, self.w, self.h))


@dataclass(frozen=True)
class Size:
    kind: str  # max | w | h | wh | pct
    w: int = 0
    h: int = 0
    pct: float = 0.0

    @classmethod
    def max(cls):
        return cls("max")

    @classmethod
    def width(cls, w):
        return cls("w", w=int(w))

    @classmethod
    def height(cls, h):
        return cls("h", h=int(h))

    @classmethod
    def exact(cls, w, h):
        return cls("wh", w=int(w), h=int(h))

    @classmethod
    def percent(cls, pct):
        return cls("pct", pct=pct)

    def validate(self):
        if self.kind == "max":
            return
        if self.kind == "w" and self.w <= 0:
            raise InvalidParameter("size width must be positive")
        if self.kind == "h" and self.h <= 0:
            raise InvalidParameter("size height must be positive")
        if self.kind == "wh" and (self.w <= 0 or self.h <= 0):
            raise InvalidParameter("size must have positive width and height")
        if self.kind == "pct" and not (0 < self.pct <= 100):
            raise InvalidParameter("size pct must be in (0, 100]")
        if self.kind not in ("max", "w", "h", "wh", "pct"):
            raise InvalidParameter(f"unknown size kind {self.kind!r}")

    def spell(self):
        if self.kind == "max":
            return "max"
        if self.kind == "w":
            return f"{self.w},"
        if self.kind == "h":
            return f",{self.h}"
        if self.kind == "wh":
            return f"{self.w},{self.h}"
        return "pct:" + _num(self.pct)


@dataclass(frozen=True)
class ImageRequest:
    service_base: str
    region: Region = Region.full()
    size: Size = Size.max()
    rotation: float = 0.0
    mirrored: bool = False
    quality: str = "default"
    format: str = "jpg"

    def validate(self):
        if not self.service_base or self.service_base.endswith("/"):
            raise InvalidParameter("service base must be a non-empty URI without trailing slash")
        if "://" not in self.service_base:
            raise InvalidParameter(f"service base must be absolute: {self.service_base!r}")
        self.region.validate()
        self.size.validate()
        if not (0 <= self.rotation < 360):
            raise InvalidParameter(f"rotation must be in [0, 360): {self.rotation}")
        if self.quality not in QUALITIES:
            raise InvalidParameter(f"unknown quality {self.quality!r}")
        if self.format not in FORMATS:
            raise InvalidParameter(f"unknown format {self.format!r}")


def build_image_uri(request):
    """Canonical request URI; InvalidParameter if the request is out of range."""
    request.validate()
    rotation = ("!" if request.mirrored else "") + _num(request.rotation)
    return (
        f"{request.service_base}/{request.region.spell()}/{request.size.spell()}"
        f"/{rotation}/{request.quality}.{request.format}"
    )


def _parse_region(text):
    if text == "full":
        return Region.full()
    if text == "square":
        return Region.square()
    if text.startswith("pct:"):
        parts = text[4:].split(",")
        if len(parts) != 4:
            raise InvalidParameter(f"pct region needs 4 numbers: {text!r}")
        return Region.pct(*(_parse_number(p) for p in parts))
    parts = text.split(",")
    if len(parts) != 4:
        raise InvalidParameter(f"pixel region needs 4 integers: {text!r}")
    values = [_parse_number(p) for p in parts]
    if any(isinstance(v, float) for v in values):
        raise InvalidParameter(f"pixel region must be integers: {text!r}")
    return Region.pixels(*values)


def _parse_size(text):
    if text == "max":
        return Size.max()
    if text.startswith("pct:"):
        return Size.percent(_parse_number(text[4:]))
    if "," not in text:
        raise InvalidParameter(f"malformed size {text!r}")
    left, right = text.split(",", 1)
    if left and right:
        return Size.exact(_parse_number(left), _parse_number(right))
    if left:
        return Size.width(_parse_number(left))
    if right:
        return Size.height(_parse_number(right))
    raise InvalidParameter(f"malformed size {text!r}")


def parse_image_uri(uri):
    """Inverse of build_image_uri; tolerates uppercase format extensions."""
    if "://" not in uri:
        raise NotImageUri(f"not an absolute URI: {uri!r}")
    scheme_auth, _, path = uri.partition("://")
    segments = path.split("/")
    # segments[0] is the authority; at least identifier + 4 request segments follow
    if len(segments) < 5:
        raise NotImageUri(f"fewer than 4 trailing path segments: {uri!r}")
    quality_format = segments[-1]
    if "." not in quality_format:
        raise NotImageUri(f"missing quality.format segment: {uri!r}")
    region_s, size_s, rotation_s = segments[-4], segments[-3], segments[-2]
    base = scheme_auth + "://" + "/".join(segments[:-4])

    quality, _, fmt = quality_format.rpartition(".")
    fmt = fmt.lower()
    mirrored = rotation_s.startswith("!")
    rotation = _parse_number(rotation_s[1:] if mirrored else rotation_s)
    request = ImageRequest(
        service_base=base,
        region=_parse_region(region_s),
        size=_parse_size(size_s),
        rotation=float(rotation),
        mirrored=mirrored,
        quality=quality,
        format=fmt,
    )
    request.validate()
    return request
