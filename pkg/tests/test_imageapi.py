import pytest
from hypothesis import given, strategies as st

from regather.errors import InvalidParameter, NotImageUri
from regather.iiif.imageapi import (
    FORMATS,
    ImageRequest,
    QUALITIES,
    Region,
    Size,
    build_image_uri,
    parse_image_uri,
)

BASE = "https://img.example/iiif/scroll-7"


def test_canonical_identity_request():
    uri = build_image_uri(ImageRequest(BASE))
    assert uri == f"{BASE}/full/max/0/default.jpg"
    assert parse_image_uri(uri) == ImageRequest(BASE)


def test_pct_region_width_size_rotation():
    request = ImageRequest(
        BASE,
        region=Region.pct(10, 10, 50, 50),
        size=Size.width(400),
        rotation=90,
        format="png",
    )
    assert build_image_uri(request) == f"{BASE}/pct:10,10,50,50/400,/90/default.png"


def test_pixel_region_exact_size_gray():
    request = parse_image_uri(f"{BASE}/0,0,100,100/50,50/180/gray.png")
    assert request.region == Region.pixels(0, 0, 100, 100)
    assert request.size == Size.exact(50, 50)
    assert request.rotation == 180
    assert request.quality == "gray"


def test_uppercase_format_tolerated():
    assert parse_image_uri(f"{BASE}/full/max/0/default.JPG").format == "jpg"


def test_missing_quality_format_segment():
    with pytest.raises(NotImageUri):
        parse_image_uri(f"{BASE}/full/max/0")


def test_too_few_segments():
    with pytest.raises(NotImageUri):
        parse_image_uri("https://img.example/full/max/0")


@pytest.mark.parametrize(
    "request_",
    [
        ImageRequest(BASE, region=Region.pixels(0, 0, 0, 10)),
        ImageRequest(BASE, region=Region.pct(0, 0, 101, 5)),
        ImageRequest(BASE, size=Size.percent(0)),
        ImageRequest(BASE, rotation=360),
        ImageRequest(BASE, quality="shiny"),
        ImageRequest(BASE, format="bmp"),
        ImageRequest(BASE + "/"),
    ],
)
def test_invalid_parameters_rejected(request_):
    with pytest.raises(InvalidParameter):
        build_image_uri(request_)


def test_mirror_flag_round_trip():
    request = ImageRequest(BASE, rotation=22.5, mirrored=True)
    uri = build_image_uri(request)
    assert "/!22.5/" in uri
    assert parse_image_uri(uri) == request


regions = st.one_of(
    st.just(Region.full()),
    st.just(Region.square()),
    st.builds(
        Region.pixels,
        st.integers(0, 5000), st.integers(0, 5000),
        st.integers(1, 5000), st.integers(1, 5000),
    ),
    st.builds(
        Region.pct,
        st.integers(0, 99), st.integers(0, 99),
        st.integers(1, 100), st.integers(1, 100),
    ),
)
sizes = st.one_of(
    st.just(Size.max()),
    st.builds(Size.width, st.integers(1, 4000)),
    st.builds(Size.height, st.integers(1, 4000)),
    st.builds(Size.exact, st.integers(1, 4000), st.integers(1, 4000)),
    st.builds(Size.percent, st.integers(1, 100)),
)
requests_ = st.builds(
    ImageRequest,
    service_base=st.just(BASE),
    region=regions,
    size=sizes,
    rotation=st.one_of(st.integers(0, 359).map(float), st.just(22.5), st.just(0.25)),
    mirrored=st.booleans(),
    quality=st.sampled_from(QUALITIES),
    format=st.sampled_from(FORMATS),
)


@given(requests_)
def test_build_parse_identity(request_):
    uri = build_image_uri(request_)
    assert parse_image_uri(uri) == request_
    assert build_image_uri(parse_image_uri(uri)) == uri
