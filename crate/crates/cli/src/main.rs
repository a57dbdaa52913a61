//! `texpdf`: inspect, attach, extract, inject, copy, harvest and validate.

mod selector;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use texpdf::access_tags::{inject_access_tags, InjectOptions, InjectTarget, DEFAULT_TAG};
use texpdf::attachments::{
    associate, embed_file, extract_attachment, list_attachments, AfRelationship, AssociateOptions, AssociationTarget,
    EmbedRequest,
};
use texpdf::content::{page_span_tree, parse_content, serialize_ops, spans};
use texpdf::cos::{serialize_document, CosValue, Document, ObjectId};
use texpdf::extraction::{accessible_text, association_report, copy_text, harvest_latex, HarvestLocation, Scope};
use texpdf::structure::{parse_structure, StructKid};
use texpdf::validate::validate_bytes;
use texpdf::Error;

use selector::Selector;

/// Version of the JSON documents printed with `--json`.
const SCHEMA_VERSION: u32 = 1;
/// /ModDate used when none is given, so output is reproducible.
const DEFAULT_MOD_DATE: &str = "D:20000101000000Z";

const EXIT_FINDINGS: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_NOT_FOUND: u8 = 4;
const EXIT_REFUSED: u8 = 5;

#[derive(Parser)]
#[command(
    name = "texpdf",
    version,
    about = "Embed, associate, extract and validate formula source in uncompressed PDF files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarise the file, or dump its structure tree, objects or a page's content.
    Inspect(InspectArgs),
    /// List embedded files and what they are associated with.
    List(ListArgs),
    /// Write embedded files to disk.
    Extract(ExtractArgs),
    /// Embed a file and associate it with a target.
    Attach(AttachArgs),
    /// Put LaTeX-carrying access tags around a formula.
    Inject(InjectArgs),
    /// Print the text Copy/Paste would produce.
    Copy(CopyArgs),
    /// Print the LaTeX sources carried by access tags.
    Harvest(HarvestArgs),
    /// Check cross-object consistency; exits 1 when anything is found.
    Validate(ValidateArgs),
    /// Show each associated file with its targets, MCIDs and text.
    Report(ReportArgs),
}

#[derive(Args)]
struct InspectArgs {
    input: PathBuf,
    /// Indented structure tree.
    #[arg(long, conflicts_with_all = ["objects", "content"])]
    structure: bool,
    /// One line per indirect object.
    #[arg(long, conflicts_with = "content")]
    objects: bool,
    /// Operators of the page with this zero-based index.
    #[arg(long, value_name = "PAGE")]
    content: Option<usize>,
}

#[derive(Args)]
struct ListArgs {
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExtractArgs {
    input: PathBuf,
    /// Name in the /EmbeddedFiles tree; every file when omitted.
    #[arg(long)]
    name: Option<String>,
    /// Output path for a single named file.
    #[arg(long, requires = "name")]
    out: Option<PathBuf>,
    /// Directory for extracted files.
    #[arg(long, default_value = ".", conflicts_with = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AttachArgs {
    input: PathBuf,
    output: PathBuf,
    /// File to embed.
    #[arg(long)]
    file: PathBuf,
    /// Name in the /EmbeddedFiles tree; defaults to the file name.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    desc: Option<String>,
    #[arg(long, default_value = "Unspecified")]
    relationship: AfRelationship,
    /// MIME type; guessed from the extension when omitted.
    #[arg(long)]
    mime: Option<String>,
    /// Association target; repeatable.
    #[arg(long = "target", default_value = "doc")]
    targets: Vec<Selector>,
    #[arg(long, default_value = DEFAULT_MOD_DATE)]
    mod_date: String,
    /// Share one /Properties dictionary across all pages.
    #[arg(long)]
    shared_resources: bool,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["latex", "latex_file"])))]
struct InjectArgs {
    input: PathBuf,
    output: PathBuf,
    /// LaTeX source of the formula.
    #[arg(long)]
    latex: Option<String>,
    /// File holding the LaTeX source.
    #[arg(long)]
    latex_file: Option<PathBuf>,
    /// `struct:<ID>`, `res:<name>` or `mcid:<page>:<first>-<last>`.
    #[arg(long)]
    target: Selector,
    /// Marked-content tag of the fake spaces.
    #[arg(long, default_value = DEFAULT_TAG, value_parser = ["AccessTag", "Span"])]
    tag: String,
    /// Font resource for the fake spaces.
    #[arg(long)]
    font: Option<String>,
    /// Leave the /RoleMap alone.
    #[arg(long)]
    no_role_map: bool,
}

#[derive(Args)]
struct CopyArgs {
    input: PathBuf,
    /// `doc`, `page:<n>` or `struct:<ID>`.
    #[arg(long, default_value = "doc")]
    scope: Selector,
    /// Accessible-text view: /Alt before /ActualText.
    #[arg(long)]
    accessible: bool,
}

#[derive(Args)]
struct HarvestArgs {
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ValidateArgs {
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReportArgs {
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::TargetNotFound(_)
            | Error::NameNotFound(_)
            | Error::UnknownTarget(_)
            | Error::MissingStructTreeRoot
            | Error::MissingResource(_) => EXIT_NOT_FOUND,
            Error::UnsupportedFeature(_)
            | Error::UnsupportedMethod(_)
            | Error::CrossesPageBoundary
            | Error::AlreadyTagged
            | Error::DuplicateName(_)
            | Error::NotAFilespec(_)
            | Error::McidAlreadyClaimed(_) => EXIT_REFUSED,
            Error::IntegrityMismatch(_) => EXIT_FINDINGS,
            _ => EXIT_PARSE,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.exit_code() == 0 { 0 } else { EXIT_USAGE });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("texpdf: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Inspect(args) => inspect(args),
        Command::List(args) => list(args),
        Command::Extract(args) => extract(args),
        Command::Attach(args) => attach(args),
        Command::Inject(args) => inject(args),
        Command::Copy(args) => copy(args),
        Command::Harvest(args) => harvest(args),
        Command::Validate(args) => validate(args),
        Command::Report(args) => report(args),
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::new(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document, Failure> {
    let bytes = read_input(path)?;
    Document::parse_lenient(&bytes).map_err(|e| {
        let code = match e {
            Error::UnsupportedFeature(_) => EXIT_REFUSED,
            _ => EXIT_PARSE,
        };
        Failure::new(code, format!("{}: {e}", path.display()))
    })
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(a), Ok(b)) => a == b,
        _ => a == b,
    }
}

fn refuse_overwrite(input: &Path, output: &Path) -> Result<(), Failure> {
    if same_file(input, output) {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("refusing to overwrite the input {}", input.display()),
        ));
    }
    Ok(())
}

fn write_file(input: &Path, output: &Path, bytes: &[u8]) -> Result<(), Failure> {
    refuse_overwrite(input, output)?;
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(output, bytes)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("cannot write {}: {e}", output.display())))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct Versioned<T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: T,
}

fn versioned<T: Serialize>(body: T) -> Versioned<T> {
    Versioned {
        schema_version: SCHEMA_VERSION,
        body,
    }
}

fn page_id(doc: &Document, index: usize) -> Result<ObjectId, Failure> {
    doc.pages()?
        .get(index)
        .copied()
        .ok_or_else(|| Failure::new(EXIT_NOT_FOUND, format!("no page {index}")))
}

fn struct_element(doc: &Document, id: &str) -> Result<ObjectId, Failure> {
    let tree = parse_structure(doc)?;
    if let Some(elem) = tree.find_by_element_id(id) {
        return Ok(elem.id);
    }
    id.parse::<u32>()
        .ok()
        .map(ObjectId::from)
        .filter(|n| tree.get(*n).is_some())
        .ok_or_else(|| Failure::new(EXIT_NOT_FOUND, format!("no structure element with /ID {id}")))
}

/// Pages whose content marks a span with the named resource.
fn pages_using_resource(doc: &Document, name: &str) -> Result<Vec<ObjectId>, Failure> {
    let mut out = Vec::new();
    for page in doc.pages()? {
        let nodes = page_span_tree(doc, page)?;
        if spans(&nodes).iter().any(|s| s.named_resource() == Some(name)) {
            out.push(page);
        }
    }
    if out.is_empty() {
        return Err(Failure::new(EXIT_NOT_FOUND, format!("no marked content uses /{name}")));
    }
    Ok(out)
}

fn describe_target(doc: &Document, target: &AssociationTarget) -> String {
    let page = |id: &ObjectId| match doc.page_index(*id) {
        Ok(Some(i)) => format!("page {i}"),
        _ => format!("page obj {id}"),
    };
    match target {
        AssociationTarget::Document => "document".into(),
        AssociationTarget::Page { page: p } => page(p),
        AssociationTarget::ContentSpan { page: p, resource } => format!("content /{resource} on {}", page(p)),
        AssociationTarget::Structure { elem } => {
            let label = doc
                .get(*elem)
                .and_then(CosValue::as_dict)
                .map(|d| {
                    let s = d.get_name("S").unwrap_or("?");
                    match d.get_text("ID") {
                        Some(id) => format!("/{s} {id}"),
                        None => format!("/{s}"),
                    }
                })
                .unwrap_or_default();
            format!("structure {label} (obj {elem})")
        }
        AssociationTarget::XObject { xobject } => format!("xobject obj {xobject}"),
        AssociationTarget::Annotation { annot } => format!("annotation obj {annot}"),
    }
}

fn inspect(args: InspectArgs) -> CliResult {
    let doc = load(&args.input)?;
    let mut out = String::new();
    if args.structure {
        let tree = parse_structure(&doc)?;
        for (depth, elem) in tree.outline() {
            let mut line = format!("{}/{} [{}]", "  ".repeat(depth), elem.structure_type, elem.id);
            if let Some(id) = &elem.element_id {
                line.push_str(&format!(" id={id}"));
            }
            if let Some(title) = &elem.title {
                line.push_str(&format!(" title={title:?}"));
            }
            let mcids: Vec<String> = elem
                .kids
                .iter()
                .filter_map(|k| match k {
                    StructKid::Mcid { mcid, .. } => Some(mcid.to_string()),
                    _ => None,
                })
                .collect();
            if !mcids.is_empty() {
                line.push_str(&format!(" mcid={}", mcids.join(",")));
            }
            if !elem.associated_files.is_empty() {
                let files: Vec<String> = elem.associated_files.iter().map(|f| f.number.to_string()).collect();
                line.push_str(&format!(" af={}", files.join(",")));
            }
            out.push_str(&line);
            out.push('\n');
        }
    } else if args.objects {
        for (id, value) in doc.objects() {
            let mut line = format!("{id} {}", value.kind());
            if let Some(t) = value.as_dict().and_then(|d| d.type_name()) {
                line.push_str(&format!(" /{t}"));
            }
            if let CosValue::Stream(s) = value {
                line.push_str(&format!(" ({} bytes)", s.data.len()));
            }
            out.push_str(&line);
            out.push('\n');
        }
    } else if let Some(index) = args.content {
        let page = page_id(&doc, index)?;
        let ops = parse_content(&doc.page_content(page)?)?;
        let bytes = serialize_ops(&ops)?;
        out.push_str(&String::from_utf8_lossy(&bytes));
    } else {
        let pages = doc.pages()?;
        let tagged = doc.catalog()?.contains_key("StructTreeRoot");
        let report = list_attachments(&doc);
        out.push_str(&format!("version {}\n", doc.version));
        out.push_str(&format!("objects {}\n", doc.object_count()));
        out.push_str(&format!("pages {}\n", pages.len()));
        out.push_str(&format!("tagged {}\n", if tagged { "yes" } else { "no" }));
        out.push_str(&format!("attachments {}\n", report.attachments.len()));
    }
    print!("{out}");
    Ok(0)
}

fn list(args: ListArgs) -> CliResult {
    let doc = load(&args.input)?;
    let report = list_attachments(&doc);
    if args.json {
        print_json(&versioned(&report))?;
    } else {
        for a in &report.attachments {
            let size = a.size.map_or("?".to_string(), |s| s.to_string());
            println!(
                "{}\t{} bytes\t{}\t{}",
                a.name,
                size,
                a.relationship.as_deref().unwrap_or("-"),
                a.mime.as_deref().unwrap_or("-")
            );
            for t in &a.targets {
                println!("  -> {}", describe_target(&doc, t));
            }
        }
        for f in &report.findings {
            eprintln!("finding: {f}");
        }
    }
    Ok(if report.findings.is_empty() { 0 } else { EXIT_FINDINGS })
}

/// Keeps only the final path component so names cannot escape the output
/// directory.
fn safe_file_name(name: &str) -> Result<String, Failure> {
    let base = name.rsplit(['/', '\\']).next().unwrap_or("");
    if base.is_empty() || base == "." || base == ".." {
        return Err(Failure::new(
            EXIT_REFUSED,
            format!("cannot derive a file name from {name:?}"),
        ));
    }
    Ok(base.to_string())
}

#[derive(Serialize)]
struct Extracted {
    name: String,
    path: PathBuf,
    size: usize,
}

fn extract(args: ExtractArgs) -> CliResult {
    let doc = load(&args.input)?;
    let names: Vec<String> = match &args.name {
        Some(n) => vec![n.clone()],
        None => list_attachments(&doc).attachments.into_iter().map(|a| a.name).collect(),
    };
    let mut written = Vec::new();
    for name in names {
        let file = extract_attachment(&doc, &name)?;
        let path = match &args.out {
            Some(p) => p.clone(),
            None => args.out_dir.join(safe_file_name(&name)?),
        };
        write_file(&args.input, &path, &file.payload)?;
        written.push(Extracted {
            name,
            path,
            size: file.payload.len(),
        });
    }
    if args.json {
        #[derive(Serialize)]
        struct Body {
            files: Vec<Extracted>,
        }
        print_json(&versioned(Body { files: written }))?;
    } else {
        for w in &written {
            println!("{}\t{} bytes\t{}", w.name, w.size, w.path.display());
        }
    }
    Ok(0)
}

fn guess_mime(name: &str) -> &'static str {
    let ext = name
        .rsplit_once('.')
        .map(|(_, e)| e.to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "tex" | "sty" | "cls" => "application/x-tex",
        "xml" | "mml" => "application/mathml+xml",
        "csv" => "text/csv",
        "txt" => "text/plain",
        "pdf" => "application/pdf",
        _ => "application/octet-stream",
    }
}

fn association_targets(doc: &Document, selector: &Selector) -> Result<Vec<AssociationTarget>, Failure> {
    Ok(match selector {
        Selector::Document => vec![AssociationTarget::Document],
        Selector::Page(n) => vec![AssociationTarget::Page {
            page: page_id(doc, *n)?,
        }],
        Selector::Struct(id) => vec![AssociationTarget::Structure {
            elem: struct_element(doc, id)?,
        }],
        Selector::Resource(name) => pages_using_resource(doc, name)?
            .into_iter()
            .map(|page| AssociationTarget::ContentSpan {
                page,
                resource: name.clone(),
            })
            .collect(),
        Selector::XObject(n) => vec![AssociationTarget::XObject {
            xobject: ObjectId::from(*n),
        }],
        Selector::Annotation(n) => vec![AssociationTarget::Annotation {
            annot: ObjectId::from(*n),
        }],
        Selector::McidRange { .. } => {
            return Err(Failure::new(EXIT_USAGE, "mcid selectors only apply to inject"));
        }
    })
}

fn attach(args: AttachArgs) -> CliResult {
    refuse_overwrite(&args.input, &args.output)?;
    let mut doc = load(&args.input)?;
    let payload = std::fs::read(&args.file)
        .map_err(|e| Failure::new(EXIT_NOT_FOUND, format!("cannot read {}: {e}", args.file.display())))?;
    let name = match args.name {
        Some(n) => n,
        None => args
            .file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .ok_or_else(|| Failure::new(EXIT_USAGE, "cannot derive a name from --file; pass --name"))?,
    };
    let mut targets = Vec::new();
    for selector in &args.targets {
        targets.extend(association_targets(&doc, selector)?);
    }
    let mime = args.mime.unwrap_or_else(|| guess_mime(&name).to_string());
    let spec = embed_file(
        &mut doc,
        &EmbedRequest {
            name: name.clone(),
            payload,
            description: args.desc,
            relationship: args.relationship,
            mime: Some(mime),
            mod_date: args.mod_date,
        },
    )?;
    let options = AssociateOptions {
        shared_resources: args.shared_resources,
    };
    for target in &targets {
        associate(&mut doc, &[spec], target, options)?;
    }
    write_file(&args.input, &args.output, &serialize_document(&doc))?;
    eprintln!("embedded {name} as object {spec}");
    Ok(0)
}

fn inject(args: InjectArgs) -> CliResult {
    refuse_overwrite(&args.input, &args.output)?;
    let mut doc = load(&args.input)?;
    let latex = match (&args.latex, &args.latex_file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => {
            let bytes = std::fs::read(path)
                .map_err(|e| Failure::new(EXIT_NOT_FOUND, format!("cannot read {}: {e}", path.display())))?;
            String::from_utf8(bytes)
                .map_err(|_| Failure::new(EXIT_USAGE, format!("{} is not UTF-8", path.display())))?
                .trim_end_matches(['\r', '\n'])
                .to_string()
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let target = match &args.target {
        Selector::Struct(id) => InjectTarget::Structure(struct_element(&doc, id)?),
        Selector::Resource(name) => InjectTarget::ContentSpan {
            page: pages_using_resource(&doc, name)?[0],
            resource: name.clone(),
        },
        Selector::McidRange { page, first, last } => InjectTarget::McidRange {
            page: page_id(&doc, *page)?,
            first: *first,
            last: *last,
        },
        other => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("inject needs struct:<ID>, res:<name> or mcid:<page>:<a>-<b>, not {other}"),
            ))
        }
    };
    let options = InjectOptions {
        tag: args.tag,
        font: args.font,
        role_map: !args.no_role_map,
    };
    let outcome = inject_access_tags(&mut doc, &target, &latex, &options)?;
    write_file(&args.input, &args.output, &serialize_document(&doc))?;
    match outcome.mcids {
        Some((open, close)) => eprintln!("access tags at MCIDs {open} and {close}, font /{}", outcome.font),
        None => eprintln!("access tags without MCIDs, font /{}", outcome.font),
    }
    Ok(0)
}

fn scope_of(doc: &Document, selector: &Selector) -> Result<Scope, Failure> {
    match selector {
        Selector::Document => Ok(Scope::Document),
        Selector::Page(index) => Ok(Scope::Page { index: *index }),
        Selector::Struct(id) => Ok(Scope::Element {
            elem: struct_element(doc, id)?,
        }),
        other => Err(Failure::new(
            EXIT_USAGE,
            format!("copy scope must be doc, page:<n> or struct:<ID>, not {other}"),
        )),
    }
}

fn platform_lines(text: &str) -> String {
    text.replace("\r\n", "\n").replace('\r', "\n")
}

fn copy(args: CopyArgs) -> CliResult {
    let doc = load(&args.input)?;
    let scope = scope_of(&doc, &args.scope)?;
    let text = if args.accessible {
        accessible_text(&doc, scope)?
    } else {
        copy_text(&doc, scope)?
    };
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{}", platform_lines(&text));
    Ok(0)
}

fn harvest(args: HarvestArgs) -> CliResult {
    let doc = load(&args.input)?;
    let found = harvest_latex(&doc)?;
    if args.json {
        #[derive(Serialize)]
        struct Body<'a> {
            formulas: &'a [texpdf::extraction::HarvestedFormula],
        }
        print_json(&versioned(Body { formulas: &found }))?;
    } else {
        for f in &found {
            let at = match &f.location {
                HarvestLocation::Span { mcid: Some(m), .. } => format!(", MCID {m}"),
                HarvestLocation::Span { mcid: None, .. } => String::new(),
                HarvestLocation::Text { line } => format!(", text line {line}"),
            };
            println!("% page {}{at}", f.page);
            println!("{}", platform_lines(&f.latex));
        }
    }
    Ok(0)
}

fn validate(args: ValidateArgs) -> CliResult {
    let bytes = read_input(&args.input)?;
    let report = validate_bytes(&bytes).map_err(|e| {
        let code = match e {
            Error::UnsupportedFeature(_) => EXIT_REFUSED,
            _ => EXIT_PARSE,
        };
        Failure::new(code, format!("{}: {e}", args.input.display()))
    })?;
    if args.json {
        #[derive(Serialize)]
        struct Body<'a> {
            clean: bool,
            findings: &'a [texpdf::validate::Finding],
        }
        print_json(&versioned(Body {
            clean: report.is_clean(),
            findings: &report.findings,
        }))?;
    } else if report.is_clean() {
        println!("clean");
    } else {
        for f in &report.findings {
            println!("{f}");
        }
    }
    Ok(if report.is_clean() { 0 } else { EXIT_FINDINGS })
}

fn report(args: ReportArgs) -> CliResult {
    let doc = load(&args.input)?;
    let report = association_report(&doc)?;
    if args.json {
        print_json(&versioned(&report))?;
    } else {
        for file in &report.files {
            println!(
                "{} (obj {}) {}",
                file.name.as_deref().unwrap_or("?"),
                file.filespec,
                file.relationship.as_deref().unwrap_or("-")
            );
            if file.targets.is_empty() {
                println!("  not associated");
            }
            for t in &file.targets {
                let mut line = format!("  {}", describe_target(&doc, &t.target));
                if !t.mcids.is_empty() {
                    let mcids: Vec<String> = t.mcids.iter().map(|m| m.to_string()).collect();
                    line.push_str(&format!(" MCIDs {}", mcids.join(",")));
                }
                if let Some(text) = &t.text {
                    line.push_str(&format!(" text {:?}", platform_lines(text)));
                }
                println!("{line}");
            }
        }
    }
    Ok(0)
}
