"""Structural GPX 1.1 checker used as a test oracle.

Re-states the ordering, multiplicity, attribute, and value-range rules of
the GPX 1.1 XSD (topografix.com/GPX/1/1/gpx.xsd) for the element subset a
waypoint/track file can contain, independently of the writer under test.
check() returns problem strings; an empty list means the document satisfies
those rules.
"""

import re
import xml.etree.ElementTree as ET

NS = "http://www.topografix.com/GPX/1/1"

# (name, max occurrences or None for unbounded) in schema sequence order;
# every entry is optional in the XSD, which keeps the order check simple
_GPX_SEQ = (("metadata", 1), ("wpt", None), ("rte", None), ("trk", None),
            ("extensions", 1))
_METADATA_SEQ = (("name", 1), ("desc", 1), ("author", 1), ("copyright", 1),
                 ("link", None), ("time", 1), ("keywords", 1), ("bounds", 1),
                 ("extensions", 1))
_WPT_SEQ = (("ele", 1), ("time", 1), ("magvar", 1), ("geoidheight", 1),
            ("name", 1), ("cmt", 1), ("desc", 1), ("src", 1), ("link", None),
            ("sym", 1), ("type", 1), ("fix", 1), ("sat", 1), ("hdop", 1),
            ("vdop", 1), ("pdop", 1), ("ageofdgpsdata", 1), ("dgpsid", 1),
            ("extensions", 1))
_RTE_SEQ = (("name", 1), ("cmt", 1), ("desc", 1), ("src", 1), ("link", None),
            ("number", 1), ("type", 1), ("extensions", 1), ("rtept", None))
_TRK_SEQ = (("name", 1), ("cmt", 1), ("desc", 1), ("src", 1), ("link", None),
            ("number", 1), ("type", 1), ("extensions", 1), ("trkseg", None))
_TRKSEG_SEQ = (("trkpt", None), ("extensions", 1))

# xsd:decimal: optional sign, digits, optional fraction; no exponent form
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d+)?|\.\d+)$")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _check_sequence(elem, seq, where: str, problems: list) -> None:
    names = [name for name, _ in seq]
    cursor = 0
    counts = {name: 0 for name in names}
    for child in elem:
        if not child.tag.startswith("{" + NS + "}"):
            problems.append(f"{where}: element {child.tag!r} outside the GPX namespace")
            continue
        name = _local(child.tag)
        if name not in counts:
            problems.append(f"{where}: unexpected element <{name}>")
            continue
        position = names.index(name)
        if position < cursor:
            problems.append(f"{where}: element <{name}> out of schema order")
            continue
        cursor = position
        counts[name] += 1
    for name, cap in seq:
        if cap is not None and counts[name] > cap:
            problems.append(f"{where}: element <{name}> appears {counts[name]} times (max {cap})")


def _check_decimal(value, what: str, problems: list,
                   low=None, high=None, high_exclusive=False) -> None:
    if value is None or not _DECIMAL.match(value):
        problems.append(f"{what}: {value!r} is not an XSD decimal")
        return
    number = float(value)
    if low is not None and number < low:
        problems.append(f"{what}: {value} below {low}")
    if high is not None:
        if high_exclusive and number >= high:
            problems.append(f"{what}: {value} not below {high}")
        if not high_exclusive and number > high:
            problems.append(f"{what}: {value} above {high}")


def _check_point(elem, where: str, problems: list) -> None:
    _check_decimal(elem.get("lat"), f"{where} lat", problems, low=-90.0, high=90.0)
    _check_decimal(elem.get("lon"), f"{where} lon", problems,
                   low=-180.0, high=180.0, high_exclusive=True)
    for attr in elem.keys():
        if attr not in ("lat", "lon"):
            problems.append(f"{where}: unexpected attribute {attr!r}")
    _check_sequence(elem, _WPT_SEQ, where, problems)
    ele = elem.find(f"{{{NS}}}ele")
    if ele is not None:
        _check_decimal(ele.text, f"{where} ele", problems)


def check(data: bytes) -> list:
    """All GPX 1.1 structural problems in the document; empty when valid."""
    problems: list = []
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        return [f"not well-formed XML: {exc}"]
    if root.tag != f"{{{NS}}}gpx":
        return [f"root element is {root.tag!r}, not GPX 1.1 <gpx>"]
    if root.get("version") != "1.1":
        problems.append(f"version attribute is {root.get('version')!r}, not '1.1'")
    if not root.get("creator"):
        problems.append("creator attribute is missing or empty")
    _check_sequence(root, _GPX_SEQ, "gpx", problems)

    metadata = root.find(f"{{{NS}}}metadata")
    if metadata is not None:
        _check_sequence(metadata, _METADATA_SEQ, "metadata", problems)
    for pos, wpt in enumerate(root.findall(f"{{{NS}}}wpt")):
        _check_point(wpt, f"wpt[{pos}]", problems)
    for pos, rte in enumerate(root.findall(f"{{{NS}}}rte")):
        _check_sequence(rte, _RTE_SEQ, f"rte[{pos}]", problems)
        for ppos, rtept in enumerate(rte.findall(f"{{{NS}}}rtept")):
            _check_point(rtept, f"rte[{pos}]/rtept[{ppos}]", problems)
    for pos, trk in enumerate(root.findall(f"{{{NS}}}trk")):
        _check_sequence(trk, _TRK_SEQ, f"trk[{pos}]", problems)
        for spos, seg in enumerate(trk.findall(f"{{{NS}}}trkseg")):
            _check_sequence(seg, _TRKSEG_SEQ, f"trk[{pos}]/trkseg[{spos}]", problems)
            for ppos, trkpt in enumerate(seg.findall(f"{{{NS}}}trkpt")):
                _check_point(trkpt, f"trk[{pos}]/trkseg[{spos}]/trkpt[{ppos}]", problems)
    return problems


def counts(data: bytes) -> tuple:
    """(waypoints, tracks, track points) in document order."""
    root = ET.fromstring(data)
    wpt = len(root.findall(f"{{{NS}}}wpt"))
    trk = len(root.findall(f"{{{NS}}}trk"))
    trkpt = len(root.findall(f"{{{NS}}}trk/{{{NS}}}trkseg/{{{NS}}}trkpt"))
    return wpt, trk, trkpt
