"""Error taxonomy shared by every subsystem.

Each error carries a short machine-readable ``code`` so the HTTP layer and
the CLI can map failures uniformly without string matching.
"""


class RegatherError(Exception):
    code = "error"
    http_status = 400

    def __init__(self, message="", **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def as_dict(self):
        out = {"error": self.code, "message": self.message}
        if self.details:
            out.update(self.details)
        return out


# --- IIIF wire formats ---

class MalformedDocument(RegatherError):
    code = "malformed_document"


class NotPresentation(RegatherError):
    code = "not_presentation"


class NestingViolation(RegatherError):
    code = "nesting_violation"


class InvariantViolation(RegatherError):
    code = "invariant_violation"


class InvalidParameter(RegatherError):
    code = "invalid_parameter"


class NotImageUri(RegatherError):
    code = "not_image_uri"


# --- registry / aggregation ---

class FetchFailed(RegatherError):
    code = "fetch_failed"
    http_status = 502


class ValidationFailed(RegatherError):
    code = "validation_failed"

    def __init__(self, message="", report=None, **details):
        super().__init__(message, **details)
        self.report = report

    def as_dict(self):
        out = super().as_dict()
        if self.report is not None:
            out["findings"] = [f.as_dict() for f in self.report.findings]
        return out


class UnknownResource(RegatherError):
    code = "unknown_resource"
    http_status = 404


class UnknownMember(RegatherError):
    code = "unknown_member"
    http_status = 404


class EmptySpec(RegatherError):
    code = "empty_spec"


class KindMismatch(RegatherError):
    code = "kind_mismatch"


class CycleDetected(RegatherError):
    code = "cycle_detected"


# --- quad store / query ---

class UnknownGraph(RegatherError):
    code = "unknown_graph"
    http_status = 404


class MalformedTerm(RegatherError):
    code = "malformed_term"


class ParseError(RegatherError):
    code = "parse_error"

    def __init__(self, message="", position=None, line=None, column=None, **details):
        if position is not None:
            details.setdefault("position", position)
        if line is not None:
            details.setdefault("line", line)
        if column is not None:
            details.setdefault("column", column)
        super().__init__(message, **details)
        self.position = position
        self.line = line
        self.column = column

    def __str__(self):
        loc = ""
        if self.line is not None:
            loc = f" at line {self.line}, column {self.column}"
        elif self.position is not None:
            loc = f" at offset {self.position}"
        return f"{self.message}{loc}"


class UnsupportedFeature(RegatherError):
    code = "unsupported_feature"


class UnknownFormat(RegatherError):
    code = "unknown_format"


class MissingColumn(RegatherError):
    code = "missing_column"


class EmptyMapping(RegatherError):
    code = "empty_mapping"


# --- annotations ---

class EmptyBody(RegatherError):
    code = "empty_body"


class RegionOutOfBounds(RegatherError):
    code = "region_out_of_bounds"


class UnknownSubject(RegatherError):
    code = "unknown_subject"
    http_status = 404


class NotAbsoluteUri(RegatherError):
    code = "not_absolute_uri"


# --- federation ---

class DuplicateName(RegatherError):
    code = "duplicate_name"
    http_status = 409


class InvalidUrl(RegatherError):
    code = "invalid_url"


class UnknownObject(RegatherError):
    code = "unknown_object"
    http_status = 404


# --- ontology service center ---

class DuplicatePrefix(RegatherError):
    code = "duplicate_prefix"
    http_status = 409


class UnknownPrefix(RegatherError):
    code = "unknown_prefix"
    http_status = 404


class UnknownVersion(RegatherError):
    code = "unknown_version"
    http_status = 404


class UnknownMode(RegatherError):
    code = "unknown_mode"


# --- OCR bridge ---

class UnknownProvider(RegatherError):
    code = "unknown_provider"
    http_status = 404


class ProviderFailed(RegatherError):
    code = "provider_failed"
    http_status = 502


class UnknownResult(RegatherError):
    code = "unknown_result"
    http_status = 404


class EmptyEditor(RegatherError):
    code = "empty_editor"


# --- service ---

class ConfigInvalid(RegatherError):
    code = "config_invalid"
