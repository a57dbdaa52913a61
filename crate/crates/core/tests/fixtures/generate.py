#!/usr/bin/env python3
"""Hand-assembles the PDF fixture corpus used by the test suites.

Offsets, xref tables, stream lengths and MD5 checksums are computed here,
independently of the Rust implementation. Every file is re-opened with
pypdf as an outside reader before being written.

Run from this directory: python3 generate.py
"""

import hashlib
import io
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))


class Pdf:
    def __init__(self, eol=b"\n", version=b"1.7"):
        self.eol = eol
        self.version = version
        self.objs = []

    def add(self, num, body, gen=0):
        if isinstance(body, str):
            body = body.encode("latin-1")
        self.objs.append((num, gen, body))

    def stream(self, num, dict_body, payload, gen=0, length=None):
        if isinstance(dict_body, str):
            dict_body = dict_body.encode("latin-1")
        if isinstance(payload, str):
            payload = payload.encode("latin-1")
        if length is None:
            length = b"%d" % len(payload)
        body = (b"<<" + dict_body + b" /Length " + length + b">>" + self.eol
                + b"stream" + self.eol + payload + self.eol + b"endstream")
        self.add(num, body, gen)

    def build(self, trailer, order=None, subsections=None, comments=b""):
        eol = self.eol
        out = io.BytesIO()
        out.write(b"%PDF-" + self.version + eol)
        out.write(b"%\xe2\xe3\xcf\xd3" + eol)
        out.write(comments)
        objs = self.objs
        if order is not None:
            by_num = {n: (n, g, b) for (n, g, b) in objs}
            objs = [by_num[n] for n in order]
        offsets = {}
        for num, gen, body in objs:
            offsets[num] = (out.tell(), gen)
            out.write(b"%d %d obj" % (num, gen) + eol + body + eol + b"endobj" + eol)
        size = max(offsets) + 1
        free = [n for n in range(1, size) if n not in offsets]
        chain = [0] + free
        entries = []
        for n in range(size):
            if n in offsets:
                off, gen = offsets[n]
                entries.append(b"%010d %05d n\r\n" % (off, gen))
            else:
                idx = chain.index(n)
                nxt = chain[idx + 1] if idx + 1 < len(chain) else 0
                gen = 65535 if n == 0 else 1
                entries.append(b"%010d %05d f\r\n" % (nxt, gen))
        xref_at = out.tell()
        out.write(b"xref" + eol)
        if subsections is None:
            subsections = [(0, size)]
        for start, count in subsections:
            out.write(b"%d %d" % (start, count) + eol)
            for n in range(start, start + count):
                out.write(entries[n])
        out.write(b"trailer" + eol)
        out.write(b"<< /Size %d " % size + trailer + b" >>" + eol)
        out.write(b"startxref" + eol + b"%d" % xref_at + eol + b"%%EOF" + eol)
        return out.getvalue()


def md5_hex(data):
    return hashlib.md5(data).hexdigest().upper()


# Attachment payloads. The TeX payload is the 16 bytes of the inline source
# followed by a newline; the MathML payload is fixed at 164 bytes.
TEX_INLINE = b"\\( k \\in \\RR \\)\n"
MATHML_INLINE = (
    b"<math\n"
    b" xmlns=\"http://www.w3.org/1998/Math/MathML\" \n"
    b" display=\"inline\" ><mrow\n"
    b"><mi \n"
    b">k</mi> <mo \n"
    b"class=\"MathClass-rel\">&#x2208;</mo> <mi \n"
    b">&#x211D;</mi></mrow></math>"
)
DOC_SOURCE = (
    b"\\documentclass{article}\n\\begin{document}\n"
    b"Let \\( k \\in \\RR \\), as required.\n\\end{document}\n"
)
DOC_SAVEDEFS = b"\\newcommand{\\RR}{\\mathbb{R}}\n"

assert len(TEX_INLINE) == 16, len(TEX_INLINE)
assert len(MATHML_INLINE) == 164, len(MATHML_INLINE)

MOD_DATE_TEX = b"(D:20140201111224+11'00')"
MOD_DATE_XML = b"(D:20140131152820+11'00')"


def embedded(pdf, num, mime_escaped, payload, mod_date):
    d = (b"/Type/EmbeddedFile /Subtype/" + mime_escaped
         + b" /Params <</ModDate " + mod_date + b" /Size %d" % len(payload)
         + b" /CheckSum <" + md5_hex(payload).encode() + b">>>")
    pdf.stream(num, d, payload)


def filespec(pdf, num, name, desc, rel, ef):
    pdf.add(num, b"<</Type/Filespec /F (" + name + b")/UF (" + name + b")"
            + b" /Desc (" + desc + b") /AFRelationship /" + rel
            + b" /EF<</F %d 0 R>> >>" % ef)


WORDS = ["Let ", "us ", "suppose ", "that ", "the ", "variable ", "satisfies ", ""]


def word_span(mcid, text, first=False):
    pos = "72 770 Td\n" if first else ""
    return ("/Span <</MCID %d>>BDC\nBT\n/F75 10.9091 Tf\n%s[(%s)]TJ\nET\nEMC\n"
            % (mcid, pos, text))


def formula_content(access_tags):
    s = "/AF /inline-1 BDC\n1 0 0 1 51.508 0 cm\n"
    if access_tags:
        s += ("/AccessTag <</MCID 8 /ActualText\n"
              " (\\015<latex>\\015k \\134in \\134RR\\015</latex>\\015<content>\\015)\n"
              ">>BDC\nBT\n/F79 1 Tf\n [( )]TJ\nET\nEMC\n")
    s += ("/mi <</MCID 9 /ActualText<FEFFD835DC58>\n /Alt(  k  )\n>>BDC\n"
          "BT\n/F30 10.9091 Tf\n [(k)]TJ\nET\nEMC\n"
          "1 0 0 1 6.023 0 cm\n"
          "/mo <</MCID 10 /ActualText<FEFF2208>\n /Alt(  as element of  )\n>>BDC\n"
          "1 0 0 1 3.03 0 cm\n"
          "BT\n/F33 10.9091 Tf\n [(2)]TJ\nET\nEMC\n"
          "1 0 0 1 10.303 0 cm\n"
          "/mi <</MCID 11 /ActualText<FEFF211D>\n /Alt(  real numbers  )\n>>BDC\n"
          "BT\n/F42 10.9091 Tf\n [(R)]TJ\nET\nEMC\n"
          "1 0 0 1 7.879 0 cm\n")
    if access_tags:
        s += ("/AccessTag <</MCID 12\n  /ActualText (\\015</content>\\015)\n>>BDC\n"
              "BT\n/F79 1 Tf\n [( )]TJ\nET\nEMC\n")
    s += "EMC\n"
    return s


def paper_document(access_tags):
    """One tagged page carrying the inline formula k in R, its structure
    subtree, both associated attachments, and two document-level files."""
    pdf = Pdf()
    # opaque colour profile stand-in (binary payload)
    pdf.stream(1, b"/N 3", bytes(range(256)) + b"endstream\nnot really\n")
    pdf.stream(2, b"/Type /Metadata /Subtype /XML",
               b"<?xpacket begin='' id='W5M0MpCehiHzreSzNTczkc9d'?>\n"
               b"<x:xmpmeta xmlns:x='adobe:ns:meta/'></x:xmpmeta>\n"
               b"<?xpacket end='w'?>")
    pdf.add(3, b"<< /Producer (fixture generator) /Title (Accessible maths)"
               b" /CreationDate (D:20140201111224+11'00') >>")
    pdf.add(5, b"<<\n/Type /Page\n/Contents 91 0 R\n/Resources 90 0 R\n"
               b"/MediaBox [0 0 595.276 841.89]\n/Tabs/S\n/Parent 773 0 R\n"
               b"/StructParents 0\n>>")
    pdf.add(20, b"<< /inline-1 [27 0 R 29 0 R] >>")
    embedded(pdf, 21, b"application#2Fx-tex", DOC_SOURCE, MOD_DATE_TEX)
    filespec(pdf, 22, b"2013-Assign2-soln.tex", b"LaTeX source of the document",
             b"Source", 21)
    embedded(pdf, 23, b"application#2Fx-tex", DOC_SAVEDEFS, MOD_DATE_TEX)
    filespec(pdf, 24, b"2013-Assign2-soln-savedefs.tex",
             b"Macro definitions used by the source", b"Supplement", 23)
    pdf.stream(25, b"/Type /XObject /Subtype /Form /BBox [0 0 10 10]",
               b"0 0 m 10 10 l S")
    embedded(pdf, 26, b"application#2Fx-tex", TEX_INLINE, MOD_DATE_TEX)
    filespec(pdf, 27, b"inline-1.tex", b"TeX source for inline math", b"Source", 26)
    embedded(pdf, 28, b"application#2Fmathml+xml", MATHML_INLINE, MOD_DATE_XML)
    filespec(pdf, 29, b"inline-1.xml", b"MathML version of inline math",
             b"Supplement", 28)
    pdf.add(90, b"<<\n /Properties 20 0 R\n /Font << /F75 97 0 R /F79 100 0 R"
                b" /F30 101 0 R /F33 102 0 R /F42 103 0 R >>\n"
                b"/XObject << /Im1 25 0 R >>\n/ProcSet [ /PDF /Text ]\n>>")
    content = "".join(word_span(i, w, i == 0) for i, w in enumerate(WORDS))
    content += formula_content(access_tags)
    content += word_span(13, ", as required.")
    pdf.stream(91, b"", content)
    role_map = b" /RoleMap << /accesstag /Custom >>" if access_tags else b""
    pdf.add(95, b"<< /Type /StructTreeRoot /K 108 0 R /ParentTree 96 0 R"
                b" /ParentTreeNextKey 1" + role_map + b" >>")
    leaf = {8: 113, 9: 114, 10: 116, 11: 118, 12: 122}
    slots = []
    for mcid in range(14):
        if mcid in leaf and (access_tags or mcid not in (8, 12)):
            slots.append(b"%d 0 R" % leaf[mcid])
        elif mcid in leaf:
            slots.append(b"null")
        else:
            slots.append(b"109 0 R")
    pdf.add(96, b"<< /Nums [0 [" + b" ".join(slots) + b"]] >>")
    for n, base in ((97, b"CMR10"), (100, b"CMR10"), (101, b"CMMI10"),
                    (102, b"CMSY10"), (103, b"MSBM10")):
        pdf.add(n, b"<< /Type /Font /Subtype /Type1 /BaseFont /" + base + b" >>")
    pdf.add(108, b"<< /Type /StructElem /S /Document /P 95 0 R /K [109 0 R] >>")
    pdf.add(109, b"<< /Type /StructElem /S /P /P 108 0 R /Pg 5 0 R"
                 b" /K [0 1 2 3 4 5 6 7 112 0 R 13] >>")
    kids = b"113 0 R\n120 0 R\n122 0 R\n" if access_tags else b"120 0 R\n"
    pdf.add(112, b"<<\n/K [\n" + kids + b"]\n/P 109 0 R\n/Type/StructElem/S/Formula \n"
                 b"/ID(Math0.1)/T(InlineMath 0.1)\n/AF [27 0 R 29 0 R] /A <</O/XML-1.01 >>\n>>")
    if access_tags:
        pdf.add(113, b"<<\n/K [ 8 ]\n/Pg 5 0 R\n/P 112 0 R\n/Type/StructElem/S/accesstag\n>>")
        pdf.add(122, b"<<\n/K [ 12 ]\n/Pg 5 0 R\n/P 112 0 R\n/Type/StructElem/S/accesstag\n>>")
    pdf.add(114, b"<<\n/K [ 9 ]\n/Pg 5 0 R\n/P 121 0 R\n/Type/StructElem/S/mi\n>>")
    pdf.add(116, b"<<\n/K [ 10 ]\n/Pg 5 0 R\n/P 121 0 R\n/Type/StructElem/S/mo \n"
                 b"/A<</O/XML-1.00/class(MathClass-rel)>>\n>>")
    pdf.add(118, b"<<\n/K [ 11 ]\n/Pg 5 0 R\n/P 121 0 R\n/Type/StructElem/S/mi\n>>")
    pdf.add(120, b"<<\n/K [ 121 0 R ]\n/P 112 0 R\n/Type/StructElem/S/math \n"
                 b"/A<</O/XML-1.00\n/xmlns(http://www.w3.org/1998/Math/MathML)\n"
                 b"/display(inline)>>\n>>")
    pdf.add(121, b"<<\n/K [\n114 0 R\n116 0 R\n118 0 R\n]\n/P 120 0 R\n"
                 b"/Type/StructElem/S/mrow\n>>")
    pdf.add(773, b"<< /Type /Pages /Kids [5 0 R] /Count 1 >>")
    pdf.add(1859, b"[ 22 0 R 24 0 R 27 0 R 29 0 R]")
    pdf.add(1860, b"<</Names [ (2013-Assign2-soln-savedefs.tex) 24 0 R"
                  b" (2013-Assign2-soln.tex) 22 0 R (inline-1.tex)\n 27 0 R"
                  b" (inline-1.xml) 29 0 R]>>")
    pdf.add(2080, b"<<\n/EmbeddedFiles 1860 0 R\n>>")
    pdf.add(2081, b"<<\n/Type /Catalog\n/Pages 773 0 R\n/Names 2080 0 R\n"
                  b"/ViewerPreferences <</DisplayDocTitle true >> \n"
                  b"/OutputIntents [ << /Type /OutputIntent \n /S/GTS_PDFA1 \n"
                  b" /DestOutputProfile 1 0 R /OutputConditionIdentifier \n"
                  b" (sRGB_IEC61966-2-1_no_black_scaling)  /Info\n"
                  b" (sRGB IEC61966 v2.1 without black scaling) >> ]\n"
                  b"/Metadata 2 0 R/Lang (en-US)\n/PageMode/UseOutlines\n"
                  b"/MarkInfo <</Marked true /AF 1859 0 R>>\n"
                  b"/AF [ 22 0 R 24 0 R]\n/StructTreeRoot 95 0 R\n>>")
    return pdf.build(b"/Root 2081 0 R /Info 3 0 R")


def minimal():
    pdf = Pdf()
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R >>")
    pdf.stream(4, "", "BT\n/F1 12 Tf\n72 712 Td\n[(Hello)]TJ\nET")
    return pdf.build(b"/Root 1 0 R")


def crlf():
    pdf = Pdf(eol=b"\r\n", version=b"1.4")
    pdf.add(1, "<< /Type /Catalog % the catalog\r\n /Pages 2 0 R >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792]\r\n"
               " /Resources << /Font << /F1 5 0 R >> >> /Contents 4 0 R >>")
    pdf.stream(4, "", "BT\r\n/F1 12 Tf\r\n72 712 Td\r\n[(Windows)-250(line)]TJ\r\nET")
    pdf.add(5, "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>")
    return pdf.build(b"/Root 1 0 R", comments=b"% produced with CRLF line ends\r\n")


def out_of_order():
    pdf = Pdf()
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R >>")
    pdf.stream(4, "", "BT /F1 12 Tf (Shuffled) Tj ET")
    pdf.add(5, "(an unreferenced string object)")
    return pdf.build(b"/Root 1 0 R", order=[4, 2, 5, 3, 1],
                     subsections=[(0, 3), (3, 3)])


def generation():
    pdf = Pdf()
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R /Outlines 6 2 R >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R >>")
    pdf.stream(4, "", "BT /F1 12 Tf (Edited) Tj ET")
    pdf.add(6, "<< /Type /Outlines /Count 0 >>", gen=2)
    return pdf.build(b"/Root 1 0 R")


def dupkeys():
    pdf = Pdf()
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R /Lang (en-AU) /Lang (fr)"
               " /XYZ_PrivateData << /Nested [1 [2 [3 null]] << /Deep true >>] >> >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612.5 792] /Contents 4 0 R"
               " /Rotate 0 /UserUnit 1.5 >>")
    pdf.stream(4, "", "q 1 0 0 1 -.5 3. cm BT /F1 12 Tf [(A)-120.5(B)]TJ ET Q")
    pdf.add(7, "<< /Name#20With#20Spaces /application#2Fx-tex"
               " /Hex <48656c6c6F> /HexOdd <414>"
               " /Lit (paren \\( and \\) and (balanced (nested)) and \\\\ back)"
               " /Esc (tab\\tline\\nreturn\\rbs\\b ff\\f oct\\101\\60\\0)"
               " /Cont (line\\\ncontinued)"
               " /Reals [-0.001 +7 .25 -3.0 0.0 123456.789]"
               " /Bools [true false] /Nil null"
               " /Empty <<>> /EmptyArr [] /EmptyStr () >>")
    return pdf.build(b"/Root 1 0 R /XYZ_TrailerKey (kept)")


def attachments_only():
    pdf = Pdf()
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R /Names 10 0 R"
               " /MarkInfo << /Marked false /AF 11 0 R >> /AF [13 0 R 15 0 R] >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R >>")
    pdf.stream(4, "", "BT /F1 12 Tf (Data attached) Tj ET")
    pdf.add(10, "<< /EmbeddedFiles << /Names [(data.csv) 15 0 R (notes.txt) 13 0 R] >> >>")
    pdf.add(11, "[13 0 R 15 0 R]")
    embedded(pdf, 12, b"text#2Fplain", b"plain notes\n", b"(D:20240101000000Z)")
    filespec(pdf, 13, b"notes.txt", b"Notes", b"Unspecified", 12)
    embedded(pdf, 14, b"text#2Fcsv", b"x,y\n1,2\n3,4\n", b"(D:20240101000000Z)")
    filespec(pdf, 15, b"data.csv", b"Tabular data", b"Data", 14)
    return pdf.build(b"/Root 1 0 R")


def indirect_length():
    pdf = Pdf()
    content = b"BT /F1 12 Tf (Indirect length) Tj ET"
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents [4 0 R 9 0 R] >>")
    pdf.stream(4, b"", content, length=b"8 0 R")
    pdf.add(8, b"%d" % len(content))
    pdf.stream(9, b"", b"BT /F1 12 Tf 0 -14 Td (Second stream) Tj ET")
    return pdf.build(b"/Root 1 0 R")


def untagged():
    pdf = Pdf()
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R /Names 20 0 R"
               " /MarkInfo << /Marked false /AF 21 0 R >> >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R] /Count 1 >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R"
               " /Resources << /Font << /F79 10 0 R /F30 11 0 R /F33 12 0 R /F42 13 0 R >>"
               " /Properties << /inline-1 [27 0 R] >> >> >>")
    body = ("BT\n/F79 10.9091 Tf\n72 700 Td\n[(Untagged text )]TJ\nET\n"
            "/AF /inline-1 BDC\n1 0 0 1 51.508 0 cm\n"
            "/mi <</ActualText<FEFFD835DC58>/Alt(  k  )>>BDC\n"
            "BT\n/F30 10.9091 Tf\n [(k)]TJ\nET\nEMC\n"
            "1 0 0 1 6.023 0 cm\n"
            "/mo <</ActualText<FEFF2208>/Alt(  as element of  )>>BDC\n"
            "BT\n/F33 10.9091 Tf\n [(2)]TJ\nET\nEMC\n"
            "1 0 0 1 10.303 0 cm\n"
            "/mi <</ActualText<FEFF211D>/Alt(  real numbers  )>>BDC\n"
            "BT\n/F42 10.9091 Tf\n [(R)]TJ\nET\nEMC\nEMC\n")
    pdf.stream(4, "", body)
    for n, base in ((10, b"CMR10"), (11, b"CMMI10"), (12, b"CMSY10"), (13, b"MSBM10")):
        pdf.add(n, b"<< /Type /Font /Subtype /Type1 /BaseFont /" + base + b" >>")
    pdf.add(20, "<< /EmbeddedFiles << /Names [(inline-1.tex) 27 0 R] >> >>")
    pdf.add(21, "[27 0 R]")
    embedded(pdf, 26, b"application#2Fx-tex", TEX_INLINE, MOD_DATE_TEX)
    filespec(pdf, 27, b"inline-1.tex", b"TeX source for inline math", b"Source", 26)
    return pdf.build(b"/Root 1 0 R")


def multi_page():
    """Two tagged pages with three single-page formulas and one formula whose
    leaves straddle the page break. No access-tags yet."""
    pdf = Pdf()
    pdf.add(1, "<< /Type /Catalog /Pages 2 0 R /StructTreeRoot 30 0 R"
               " /MarkInfo << /Marked true >> >>")
    pdf.add(2, "<< /Type /Pages /Kids [3 0 R 4 0 R] /Count 2"
               " /Resources << /Font << /F1 9 0 R /F2 10 0 R >> >> >>")
    pdf.add(3, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 5 0 R"
               " /StructParents 0 >>")
    pdf.add(4, "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 6 0 R"
               " /StructParents 1 >>")

    def leaf(tag, mcid, actual, glyph):
        return ("/%s <</MCID %d /ActualText<%s>>>BDC\nBT\n/F2 10 Tf\n[(%s)]TJ\nET\nEMC\n"
                % (tag, mcid, actual, glyph))

    p0 = ("/P <</MCID 0>>BDC\nBT\n/F1 10 Tf\n72 700 Td\n[(First )]TJ\nET\nEMC\n"
          + leaf("mi", 1, "FEFF0078", "x")
          + "1 0 0 1 20 0 cm\n"
          + "/P <</MCID 2>>BDC\nBT\n/F1 10 Tf\n[(then )]TJ\nET\nEMC\n"
          + leaf("mi", 3, "FEFF0079", "y") + leaf("mo", 4, "FEFF002B", "+")
          + leaf("mn", 5, "FEFF0031", "1")
          + "1 0 0 1 20 0 cm\n"
          + leaf("mi", 6, "FEFF0061", "a"))
    p1 = (leaf("mi", 0, "FEFF0062", "b")
          + "/P <</MCID 1>>BDC\nBT\n/F1 10 Tf\n[(and )]TJ\nET\nEMC\n"
          + leaf("mi", 2, "FEFF007A", "z"))
    pdf.stream(5, "", p0)
    pdf.stream(6, "", p1)
    pdf.add(9, "<< /Type /Font /Subtype /Type1 /BaseFont /Times-Roman >>")
    pdf.add(10, "<< /Type /Font /Subtype /Type1 /BaseFont /Times-Italic >>")
    pdf.add(30, "<< /Type /StructTreeRoot /K [31 0 R] /ParentTree 32 0 R"
                " /ParentTreeNextKey 2 >>")
    pdf.add(31, "<< /Type /StructElem /S /Document /P 30 0 R"
                " /K [33 0 R 40 0 R 34 0 R 50 0 R 60 0 R 35 0 R 70 0 R] >>")
    pdf.add(32, "<< /Nums [0 [33 0 R 42 0 R 34 0 R 53 0 R 54 0 R 55 0 R 63 0 R]"
                " 1 [64 0 R 35 0 R 72 0 R]] >>")
    pdf.add(33, "<< /Type /StructElem /S /P /P 31 0 R /Pg 3 0 R /K 0 >>")
    pdf.add(34, "<< /Type /StructElem /S /P /P 31 0 R /Pg 3 0 R /K [2] >>")
    pdf.add(35, "<< /Type /StructElem /S /P /P 31 0 R /Pg 4 0 R /K [1] >>")

    def formula(num, ident, leaves):
        pdf.add(num, "<< /Type /StructElem /S /Formula /P 31 0 R /ID (%s)"
                     " /T (InlineMath %s) /K [%d 0 R] >>" % (ident, ident[4:], num + 1))
        kids = " ".join("%d 0 R" % n for n, _, _, _ in leaves)
        pdf.add(num + 1, "<< /Type /StructElem /S /math /P %d 0 R /K [%s]"
                         " /A << /O /XML-1.00 /xmlns (http://www.w3.org/1998/Math/MathML)"
                         " /display (inline) >> >>" % (num, kids))
        for n, tag, mcid, page in leaves:
            pdf.add(n, "<< /Type /StructElem /S /%s /P %d 0 R /Pg %d 0 R /K [%d] >>"
                       % (tag, num + 1, page, mcid))

    formula(40, "Math0.1", [(42, "mi", 1, 3)])
    formula(50, "Math0.2", [(53, "mi", 3, 3), (54, "mo", 4, 3), (55, "mn", 5, 3)])
    formula(60, "Math0.3", [(63, "mi", 6, 3), (64, "mi", 0, 4)])
    formula(70, "Math1.1", [(72, "mi", 2, 4)])
    return pdf.build(b"/Root 1 0 R")


def check_with_pypdf(name, data):
    try:
        import pypdf
    except ImportError:
        print("pypdf unavailable; skipping reader check for", name, file=sys.stderr)
        return
    # duplicate keys are legal but pypdf only tolerates them in lenient mode
    reader = pypdf.PdfReader(io.BytesIO(data), strict=(name != "dupkeys.pdf"))
    root = reader.trailer["/Root"].get_object()
    assert root["/Type"] == "/Catalog", name
    for page in reader.pages:
        page.get_contents()
    for key in reader.xref.get(0, {}):
        reader.get_object(pypdf.generic.IndirectObject(key, 0, reader))


FIXTURES = {
    "minimal.pdf": minimal,
    "crlf.pdf": crlf,
    "out_of_order.pdf": out_of_order,
    "generation.pdf": generation,
    "dupkeys.pdf": dupkeys,
    "attachments_only.pdf": attachments_only,
    "indirect_length.pdf": indirect_length,
    "untagged.pdf": untagged,
    "multi_page.pdf": multi_page,
    "fig1_3.pdf": lambda: paper_document(False),
    "fig5.pdf": lambda: paper_document(True),
}


def main():
    for name, build in FIXTURES.items():
        data = build()
        check_with_pypdf(name, data)
        with open(os.path.join(HERE, name), "wb") as f:
            f.write(data)
        print("%-22s %7d bytes" % (name, len(data)))
    write_payloads()


PAYLOADS = {
    "inline-1.tex": TEX_INLINE,
    "inline-1.xml": MATHML_INLINE,
    "2013-Assign2-soln.tex": DOC_SOURCE,
    "2013-Assign2-soln-savedefs.tex": DOC_SAVEDEFS,
    "notes.txt": b"plain notes\n",
    "data.csv": b"x,y\n1,2\n3,4\n",
    "empty.bin": b"",
}


def write_payloads():
    """Payload files plus their MD5 digests from hashlib, the oracle the Rust
    tests compare /CheckSum values against."""
    folder = os.path.join(HERE, "payloads")
    os.makedirs(folder, exist_ok=True)
    lines = []
    for name, data in sorted(PAYLOADS.items()):
        with open(os.path.join(folder, name), "wb") as f:
            f.write(data)
        lines.append("%s %d %s\n" % (name, len(data), md5_hex(data)))
    with open(os.path.join(HERE, "md5_oracle.txt"), "w") as f:
        f.writelines(lines)
    sys.stdout.writelines(lines)


if __name__ == "__main__":
    main()
