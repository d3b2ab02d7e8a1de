"""Client toolkit for research data in DSpace-style repositories."""
from .errors import OdrkError
from .federation import federated_search, to_result_table, value_counts
from .models import BitstreamRef, ItemRecord, MetadataField, RepositoryEndpoint
from .profile import describe, render_profile
from .repo_client import download, fetch_range, get_item, search_repository
from .tabular import convert, parse_delimited, preview_head, preview_tail

__version__ = "0.1.0"

__all__ = [
    "BitstreamRef",
    "ItemRecord",
    "MetadataField",
    "OdrkError",
    "RepositoryEndpoint",
    "convert",
    "describe",
    "download",
    "federated_search",
    "fetch_range",
    "get_item",
    "parse_delimited",
    "preview_head",
    "preview_tail",
    "render_profile",
    "search_repository",
    "to_result_table",
    "value_counts",
]
