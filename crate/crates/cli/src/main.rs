//! Command line front end: sequence tooling, multilevel dealing and
//! reconstruction, the published-delta attack, and threshold signing.
//! Every command reads and writes the canonical documents from [`docs`].
//!
//! Exit codes: 0 on success (for checks: when the answer is yes), 1 on a
//! domain error or a negative answer, 2 on malformed input. Domain errors
//! print `{"error": <code>}` to stderr.

mod docs;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use mtss_core::{
    attack_at_level, check_condition, combine, crt_solve, deal, deal_conjunctive, example_dealing,
    generate_anchor_sequence, generate_hf_sequence, hf_deal_fixed, hf_deal_original, partial_sign,
    public_part, reconstruct, reconstruct_conjunctive, rsa_setup, rsa_setup_with_safe_primes,
    verify, Coalition, CoalitionContext, CongruenceSystem, Error, HfShare, LevelStructure,
    MtssShare, PrimeSequence, SequenceKind,
};

use docs::{CliError, CliResult, Scheme};

#[derive(Parser)]
#[command(
    name = "mtss",
    version,
    about = "CRT-based multilevel secret sharing: dealing, auditing, threshold signing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a prime sequence over a secret space.
    SeqGen(SeqGenArgs),
    /// Test a sequence inequality. Exits 0 when it holds, 1 when it fails.
    SeqCheck(SeqCheckArgs),
    /// Deal a secret across levels, writing a transcript and share files.
    Deal(DealArgs),
    /// Recover a secret from a transcript and share files.
    Reconstruct(ReconstructArgs),
    /// Deal under the audited scheme, in either variant.
    HfDeal(HfDealArgs),
    /// Run the published-delta attack from captured shares.
    HfAttack(HfAttackArgs),
    /// Create an RSA group key and deal out its signing exponent.
    RsaSetup(RsaSetupArgs),
    /// Compute one coalition member's signature fragment.
    RsaSignPartial(RsaSignPartialArgs),
    /// Compute the public correction factor for one member.
    RsaPublicPart(RsaPublicPartArgs),
    /// Multiply fragments and corrections into a full signature.
    RsaCombine(RsaCombineArgs),
    /// Check a signature. Exits 0 when valid, 1 when not.
    RsaVerify(RsaVerifyArgs),
    /// Walk through the bundled two-level dealing and the attack on it.
    DemoExample2,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqKind {
    /// One sequence covering every threshold of a level structure.
    Anchor,
    /// A per-level sequence under the audited scheme's inequality.
    Hf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Mignotte,
    Classic,
    Statistical,
    Anchor,
}

#[derive(Clone, Copy, ValueEnum)]
enum DealScheme {
    Disjunctive,
    Conjunctive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Original,
    Fixed,
}

#[derive(clap::Args)]
struct SeqGenArgs {
    #[arg(long, value_enum)]
    kind: SeqKind,
    /// Secret space, a decimal integer.
    #[arg(long)]
    p0: String,
    /// Number of moduli.
    #[arg(long)]
    n: usize,
    /// Threshold, required for kind hf.
    #[arg(long)]
    t: Option<usize>,
    /// Seed for primality witness selection.
    #[arg(long)]
    seed: u64,
}

#[derive(clap::Args)]
struct SeqCheckArgs {
    /// A prime_sequence document to check.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Secret space, when the sequence is given inline.
    #[arg(long)]
    p0: Option<String>,
    /// Comma-separated moduli, when the sequence is given inline.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<String>>,
    #[arg(long, value_enum)]
    kind: CheckKind,
    /// Threshold, required for every kind except anchor.
    #[arg(long)]
    t: Option<usize>,
}

#[derive(clap::Args)]
struct DealArgs {
    #[arg(long, value_enum)]
    scheme: DealScheme,
    /// The secret, a decimal integer below p0.
    #[arg(long)]
    secret: String,
    #[arg(long)]
    p0: String,
    /// Comma-separated level sizes, senior level first.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// Comma-separated level thresholds, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    thresholds: Vec<usize>,
    #[arg(long)]
    seed: u64,
    /// Directory receiving transcript.json and share_NNN.json files.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(clap::Args)]
struct ReconstructArgs {
    #[arg(long)]
    transcript: PathBuf,
    /// A share file; repeat once per coalition member.
    #[arg(long = "share", required = true)]
    shares: Vec<PathBuf>,
}

#[derive(clap::Args)]
struct HfDealArgs {
    #[arg(long, value_enum)]
    variant: Variant,
    #[arg(long)]
    secret: String,
    #[arg(long)]
    p0: String,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    thresholds: Vec<usize>,
    #[arg(long)]
    seed: u64,
    /// Directory receiving transcript.json and hf_share_L_K.json files.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(clap::Args)]
struct HfAttackArgs {
    #[arg(long)]
    transcript: PathBuf,
    /// A captured share file; repeat once per corrupted member.
    #[arg(long = "share", required = true)]
    shares: Vec<PathBuf>,
    /// The level whose blinded value the attack enumerates.
    #[arg(long)]
    target: usize,
}

#[derive(clap::Args)]
struct RsaSetupArgs {
    /// Bit length of the generated modulus.
    #[arg(long)]
    bits: Option<u64>,
    /// Sophie Germain half of the first factor, for a deterministic key.
    #[arg(long)]
    p_half: Option<String>,
    /// Sophie Germain half of the second factor.
    #[arg(long)]
    q_half: Option<String>,
    /// Public verification exponent.
    #[arg(long)]
    exponent: String,
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    thresholds: Vec<usize>,
    #[arg(long)]
    seed: u64,
    /// Directory receiving rsa_public.json and share_NNN.json files.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(clap::Args)]
struct RsaSignPartialArgs {
    /// The message, a decimal integer below the group modulus.
    #[arg(long)]
    message: String,
    /// The rsa_public.json document.
    #[arg(long)]
    public: PathBuf,
    /// The signing member's private share file.
    #[arg(long)]
    share: PathBuf,
    /// Comma-separated participant numbers of the whole coalition.
    #[arg(long, value_delimiter = ',')]
    coalition: Vec<usize>,
}

#[derive(clap::Args)]
struct RsaPublicPartArgs {
    #[arg(long)]
    message: String,
    #[arg(long)]
    public: PathBuf,
    /// Participant whose correction factor to compute.
    #[arg(long)]
    participant: usize,
    #[arg(long, value_delimiter = ',')]
    coalition: Vec<usize>,
}

#[derive(clap::Args)]
struct RsaCombineArgs {
    #[arg(long)]
    message: String,
    #[arg(long)]
    public: PathBuf,
    #[arg(long, value_delimiter = ',')]
    coalition: Vec<usize>,
    /// A partial_signature document; repeat once per member.
    #[arg(long = "partial", required = true)]
    partials: Vec<PathBuf>,
    /// A public_part document; repeat once per member.
    #[arg(long = "public-part", required = true)]
    public_parts: Vec<PathBuf>,
}

#[derive(clap::Args)]
struct RsaVerifyArgs {
    #[arg(long)]
    message: String,
    /// A signature document.
    #[arg(long)]
    signature_file: Option<PathBuf>,
    /// The signature as a decimal integer.
    #[arg(long)]
    signature_value: Option<String>,
    #[arg(long)]
    public: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Domain(e)) => {
            eprintln!("{}", json!({ "error": e.code() }));
            ExitCode::from(1)
        }
        Err(CliError::Malformed(msg)) => {
            eprintln!("{}", json!({ "detail": msg, "error": "malformed_input" }));
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::SeqGen(a) => seq_gen(a),
        Command::SeqCheck(a) => seq_check(a),
        Command::Deal(a) => deal_cmd(a),
        Command::Reconstruct(a) => reconstruct_cmd(a),
        Command::HfDeal(a) => hf_deal_cmd(a),
        Command::HfAttack(a) => hf_attack_cmd(a),
        Command::RsaSetup(a) => rsa_setup_cmd(a),
        Command::RsaSignPartial(a) => rsa_sign_partial_cmd(a),
        Command::RsaPublicPart(a) => rsa_public_part_cmd(a),
        Command::RsaCombine(a) => rsa_combine_cmd(a),
        Command::RsaVerify(a) => rsa_verify_cmd(a),
        Command::DemoExample2 => demo_example2(),
    }
}

fn read_doc(path: &Path) -> CliResult<(Scheme, bool, serde_json::Value)> {
    let text = fs::read_to_string(path)
        .map_err(|e| docs::malformed(format!("cannot read {}: {e}", path.display())))?;
    docs::parse(&text)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text)
        .map_err(|e| docs::malformed(format!("cannot write {}: {e}", path.display())))
}

fn make_out_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)
        .map_err(|e| docs::malformed(format!("cannot create {}: {e}", dir.display())))
}

fn expect_scheme(got: Scheme, want: Scheme) -> CliResult<()> {
    if got != want {
        return Err(docs::malformed(format!(
            "document belongs to scheme {}, expected {}",
            got.as_str(),
            want.as_str()
        )));
    }
    Ok(())
}

fn seq_gen(a: SeqGenArgs) -> CliResult<u8> {
    let p0 = docs::parse_big(&a.p0)?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let (scheme, payload) = match a.kind {
        SeqKind::Anchor => {
            let seq = generate_anchor_sequence(&p0, a.n, &mut rng)?;
            (Scheme::AsmuthBloom, docs::sequence_payload(&seq, "anchor", None))
        }
        SeqKind::Hf => {
            let t = a.t.ok_or_else(|| docs::malformed("--t is required for kind hf"))?;
            let seq = generate_hf_sequence(&p0, a.n, t, &mut rng)?;
            (Scheme::HarnFuyouOriginal, docs::sequence_payload(&seq, "hf", Some(t)))
        }
    };
    print!("{}", docs::render(scheme, false, payload));
    Ok(0)
}

fn seq_check(a: SeqCheckArgs) -> CliResult<u8> {
    let seq = match (&a.file, &a.p0, &a.primes) {
        (Some(path), None, None) => {
            let (_, _, payload) = read_doc(path)?;
            docs::read_sequence(&payload)?
        }
        (None, Some(p0), Some(primes)) => {
            let moduli = primes
                .iter()
                .map(|s| docs::parse_big(s))
                .collect::<CliResult<Vec<_>>>()?;
            PrimeSequence::new(docs::parse_big(p0)?, moduli)?
        }
        _ => {
            return Err(docs::malformed(
                "pass either --file or both --p0 and --primes",
            ))
        }
    };
    let need_t = || a.t.ok_or_else(|| docs::malformed("--t is required for this kind"));
    let (kind, label) = match a.kind {
        CheckKind::Mignotte => (SequenceKind::Mignotte { t: need_t()? }, "mignotte"),
        CheckKind::Classic => (SequenceKind::AsmuthBloomClassic { t: need_t()? }, "classic"),
        CheckKind::Statistical => (
            SequenceKind::AsmuthBloomStatistical { t: need_t()? },
            "statistical",
        ),
        CheckKind::Anchor => (SequenceKind::Anchor, "anchor"),
    };
    let holds = check_condition(&seq, &kind)?;
    let scheme = match a.kind {
        CheckKind::Mignotte => Scheme::Mignotte,
        _ => Scheme::AsmuthBloom,
    };
    let threshold = match a.kind {
        CheckKind::Anchor => None,
        _ => a.t,
    };
    print!("{}", docs::render(scheme, false, docs::check_payload(label, threshold, holds)));
    Ok(if holds { 0 } else { 1 })
}

fn deal_cmd(a: DealArgs) -> CliResult<u8> {
    let secret = docs::parse_big(&a.secret)?;
    let p0 = docs::parse_big(&a.p0)?;
    let structure = LevelStructure::contiguous(&a.sizes, &a.thresholds)?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let sequence = generate_anchor_sequence(&p0, structure.participant_count(), &mut rng)?;
    let (scheme, shares, deltas, bounds) = match a.scheme {
        DealScheme::Disjunctive => {
            let t = deal(&secret, &structure, &sequence, &mut rng)?;
            (Scheme::MtssDisjunctive, t.shares, t.deltas, t.level_bounds)
        }
        DealScheme::Conjunctive => {
            let t = deal_conjunctive(&secret, &structure, &sequence, &mut rng)?;
            (Scheme::MtssConjunctive, t.shares, t.deltas, t.level_bounds)
        }
    };
    make_out_dir(&a.out_dir)?;
    let transcript = docs::render(
        scheme,
        false,
        docs::transcript_payload(&structure, &sequence, &bounds, &deltas),
    );
    write_file(&a.out_dir.join("transcript.json"), &transcript)?;
    for share in &shares {
        let doc = docs::render(scheme, true, docs::share_payload(share));
        let name = format!("share_{:03}.json", share.participant);
        write_file(&a.out_dir.join(name), &doc)?;
    }
    print!("{transcript}");
    Ok(0)
}

fn reconstruct_cmd(a: ReconstructArgs) -> CliResult<u8> {
    let (scheme, _, payload) = read_doc(&a.transcript)?;
    let doc = docs::read_transcript(&payload)?;
    let mut by_participant: BTreeMap<usize, MtssShare> = BTreeMap::new();
    for path in &a.shares {
        let (share_scheme, _, share_payload) = read_doc(path)?;
        expect_scheme(share_scheme, scheme)?;
        let share = docs::read_share(&share_payload)?;
        if let Some(prev) = by_participant.get(&share.participant) {
            if *prev != share {
                return Err(Error::InconsistentShares.into());
            }
        }
        by_participant.insert(share.participant, share);
    }
    let coalition: Coalition = by_participant.keys().copied().collect();
    let shares: Vec<MtssShare> = by_participant.into_values().collect();
    let secret = match scheme {
        Scheme::MtssDisjunctive => {
            reconstruct(&coalition, &shares, &doc.deltas, &doc.structure, &doc.sequence)?
        }
        Scheme::MtssConjunctive => reconstruct_conjunctive(
            &coalition,
            &shares,
            &doc.deltas,
            &doc.structure,
            &doc.sequence,
        )?,
        _ => {
            return Err(docs::malformed(
                "transcript does not belong to a multilevel dealing",
            ))
        }
    };
    print!("{}", docs::render(scheme, false, docs::secret_payload(&secret)));
    Ok(0)
}

fn hf_deal_cmd(a: HfDealArgs) -> CliResult<u8> {
    let secret = docs::parse_big(&a.secret)?;
    let p0 = docs::parse_big(&a.p0)?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let dealing = match a.variant {
        Variant::Original => hf_deal_original(&secret, &p0, &a.sizes, &a.thresholds, &mut rng)?,
        Variant::Fixed => hf_deal_fixed(&secret, &p0, &a.sizes, &a.thresholds, &mut rng)?,
    };
    let scheme = docs::hf_scheme(dealing.parameters.variant);
    make_out_dir(&a.out_dir)?;
    let transcript = docs::render(scheme, false, docs::hf_transcript_payload(&dealing));
    write_file(&a.out_dir.join("transcript.json"), &transcript)?;
    for share in &dealing.shares {
        let doc = docs::render(scheme, true, docs::hf_share_payload(share));
        let name = format!(
            "hf_share_{}_{}.json",
            share.participant.level, share.participant.index
        );
        write_file(&a.out_dir.join(name), &doc)?;
    }
    print!("{transcript}");
    Ok(0)
}

fn hf_attack_cmd(a: HfAttackArgs) -> CliResult<u8> {
    let (scheme, _, payload) = read_doc(&a.transcript)?;
    let (params, cross) = docs::read_hf_transcript(scheme, &payload)?;
    let mut corrupted: Vec<HfShare> = Vec::new();
    for path in &a.shares {
        let (share_scheme, _, share_payload) = read_doc(path)?;
        expect_scheme(share_scheme, scheme)?;
        corrupted.push(docs::read_hf_share(&share_payload)?);
    }
    let report = attack_at_level(&corrupted, &cross, &params, a.target)?;
    print!("{}", docs::render(scheme, false, docs::attack_payload(&report)));
    Ok(0)
}

fn rsa_setup_cmd(a: RsaSetupArgs) -> CliResult<u8> {
    let e = docs::parse_big(&a.exponent)?;
    let structure = LevelStructure::contiguous(&a.sizes, &a.thresholds)?;
    let mut rng = ChaCha20Rng::seed_from_u64(a.seed);
    let (key, transcript) = match (a.bits, &a.p_half, &a.q_half) {
        (Some(bits), None, None) => rsa_setup(bits, &e, &structure, &mut rng)?,
        (None, Some(p), Some(q)) => {
            let p_half = docs::parse_big(p)?;
            let q_half = docs::parse_big(q)?;
            rsa_setup_with_safe_primes(&p_half, &q_half, &e, &structure, &mut rng)?
        }
        _ => {
            return Err(docs::malformed(
                "pass either --bits or both --p-half and --q-half",
            ))
        }
    };
    make_out_dir(&a.out_dir)?;
    let public = docs::render(
        Scheme::RsaMtss,
        false,
        docs::rsa_public_payload(&key, &transcript),
    );
    write_file(&a.out_dir.join("rsa_public.json"), &public)?;
    for share in &transcript.shares {
        let doc = docs::render(Scheme::RsaMtss, true, docs::share_payload(share));
        let name = format!("share_{:03}.json", share.participant);
        write_file(&a.out_dir.join(name), &doc)?;
    }
    print!("{public}");
    Ok(0)
}

fn read_rsa_public(path: &Path) -> CliResult<docs::RsaPublicDoc> {
    let (scheme, _, payload) = read_doc(path)?;
    expect_scheme(scheme, Scheme::RsaMtss)?;
    docs::read_rsa_public(&payload)
}

fn rsa_sign_partial_cmd(a: RsaSignPartialArgs) -> CliResult<u8> {
    let public = read_rsa_public(&a.public)?;
    let (share_scheme, _, share_payload) = read_doc(&a.share)?;
    expect_scheme(share_scheme, Scheme::RsaMtss)?;
    let share = docs::read_share(&share_payload)?;
    let msg = docs::parse_big(&a.message)?;
    let coalition: Coalition = a.coalition.iter().copied().collect();
    let ctx = CoalitionContext::build(&coalition, &public.structure, &public.sequence)?;
    let fragment = partial_sign(&msg, &share, &ctx, &public.key)?;
    print!(
        "{}",
        docs::render(
            Scheme::RsaMtss,
            true,
            docs::fragment_payload("partial_signature", share.participant, &fragment),
        )
    );
    Ok(0)
}

fn rsa_public_part_cmd(a: RsaPublicPartArgs) -> CliResult<u8> {
    let public = read_rsa_public(&a.public)?;
    let msg = docs::parse_big(&a.message)?;
    let coalition: Coalition = a.coalition.iter().copied().collect();
    let ctx = CoalitionContext::build(&coalition, &public.structure, &public.sequence)?;
    let factor = public_part(&msg, a.participant, &public.deltas, &ctx, &public.key)?;
    print!(
        "{}",
        docs::render(
            Scheme::RsaMtss,
            false,
            docs::fragment_payload("public_part", a.participant, &factor),
        )
    );
    Ok(0)
}

fn read_fragments(paths: &[PathBuf], object: &str) -> CliResult<BTreeMap<usize, BigUint>> {
    let mut map = BTreeMap::new();
    for path in paths {
        let (scheme, _, payload) = read_doc(path)?;
        expect_scheme(scheme, Scheme::RsaMtss)?;
        let (participant, value) = docs::read_fragment(&payload, object)?;
        if map.insert(participant, value).is_some() {
            return Err(Error::InconsistentShares.into());
        }
    }
    Ok(map)
}

fn rsa_combine_cmd(a: RsaCombineArgs) -> CliResult<u8> {
    let public = read_rsa_public(&a.public)?;
    let msg = docs::parse_big(&a.message)?;
    let coalition: Coalition = a.coalition.iter().copied().collect();
    let ctx = CoalitionContext::build(&coalition, &public.structure, &public.sequence)?;
    let fragments = read_fragments(&a.partials, "partial_signature")?;
    let factors = read_fragments(&a.public_parts, "public_part")?;
    for k in fragments.keys().chain(factors.keys()) {
        if ctx.member(*k).is_none() {
            return Err(Error::NotMember.into());
        }
    }
    let mut partials = Vec::new();
    let mut publics = Vec::new();
    for member in &ctx.members {
        partials.push(
            fragments
                .get(&member.participant)
                .cloned()
                .ok_or(Error::ShareMissing)?,
        );
        publics.push(
            factors
                .get(&member.participant)
                .cloned()
                .ok_or(Error::DeltaMissing)?,
        );
    }
    let signature = combine(&msg, &partials, &publics, &ctx, &public.key)?;
    print!(
        "{}",
        docs::render(Scheme::RsaMtss, false, docs::signature_payload(&signature))
    );
    Ok(0)
}

fn rsa_verify_cmd(a: RsaVerifyArgs) -> CliResult<u8> {
    let public = read_rsa_public(&a.public)?;
    let msg = docs::parse_big(&a.message)?;
    let signature = match (&a.signature_file, &a.signature_value) {
        (Some(path), None) => {
            let (scheme, _, payload) = read_doc(path)?;
            expect_scheme(scheme, Scheme::RsaMtss)?;
            docs::read_signature(&payload)?
        }
        (None, Some(value)) => docs::parse_big(value)?,
        _ => {
            return Err(docs::malformed(
                "pass exactly one of --signature-file or --signature-value",
            ))
        }
    };
    let valid = verify(&msg, &signature, &public.key);
    print!(
        "{}",
        docs::render(Scheme::RsaMtss, false, docs::verdict_payload(valid))
    );
    Ok(if valid { 0 } else { 1 })
}

fn demo_example2() -> CliResult<u8> {
    let dealing = example_dealing();
    let params = &dealing.parameters;
    let seniors_needed = params.thresholds[1];
    let corrupted: Vec<HfShare> = dealing
        .shares
        .iter()
        .filter(|s| s.participant.level == 2)
        .cloned()
        .collect();
    let report = attack_at_level(&corrupted, &dealing.cross, params, 2)?;

    println!("A two-level dealing under the repaired sizing rules, then the attack");
    println!("that unmasked cross deltas allow.");
    println!();
    println!("parameters: secret space p0 = {}, dealt secret 1", params.p0);
    for level in 1..=params.level_count() {
        let own: Vec<String> = (1..=params.sizes[level - 1])
            .map(|i| params.own_prime(level, i).map(BigUint::to_string))
            .collect::<Result<_, _>>()?;
        println!(
            "  level {level}: {} members, threshold {}, own moduli {}",
            params.sizes[level - 1],
            params.thresholds[level - 1],
            own.join(" ")
        );
    }
    println!();
    println!("private shares (value mod own modulus)");
    for share in &dealing.shares {
        println!(
            "  u({},{}) = {:>2}  (mod {})",
            share.participant.level, share.participant.index, share.value, share.modulus
        );
    }
    println!();
    println!("published deltas letting level-1 members act at level 2");
    for info in &dealing.cross {
        println!(
            "  u({},{}): delta {:>2} against cross modulus {}",
            info.participant.level, info.participant.index, info.delta, info.modulus
        );
    }
    println!();
    println!("reconstruction check");
    let share = |level: usize, index: usize| {
        dealing
            .shares
            .iter()
            .find(|s| s.participant.level == level && s.participant.index == index)
            .expect("dealing covers every member")
    };
    let (s11, s12) = (share(1, 1), share(1, 2));
    let y1 = crt_solve(&CongruenceSystem::new(vec![
        (s11.value.clone(), s11.modulus.clone()),
        (s12.value.clone(), s12.modulus.clone()),
    ])?)?;
    println!(
        "  level 1 via u(1,1) and u(1,2): y = {}, secret = {} mod {} = {}",
        y1,
        y1,
        params.p0,
        &y1 % &params.p0
    );
    let senior_cross = dealing
        .cross
        .iter()
        .find(|c| c.participant == s11.participant && c.target_level == 2)
        .expect("u(1,1) carries a published delta toward level 2");
    let cross_residue = (&s11.value + &senior_cross.delta) % &senior_cross.modulus;
    let (s21, s22) = (share(2, 1), share(2, 2));
    let y2 = crt_solve(&CongruenceSystem::new(vec![
        (s21.value.clone(), s21.modulus.clone()),
        (s22.value.clone(), s22.modulus.clone()),
        (cross_residue, senior_cross.modulus.clone()),
    ])?)?;
    println!(
        "  level 2 via u(2,1), u(2,2) and u(1,1) through its delta: y = {}, secret = {}",
        y2,
        &y2 % &params.p0
    );
    println!();
    println!(
        "attack: {} level-2 members pool their shares where {} are required",
        corrupted.len(),
        seniors_needed
    );
    println!(
        "  combined residue {} modulo {}; candidates {} + K*{} for K in [{}, {}]",
        report.base, report.step, report.base, report.step, report.k_min, report.k_max
    );
    println!("  a candidate y survives when, for every delta D over cross modulus q,");
    println!("  (y - D) mod q lands below the publisher's own modulus; * marks a miss");
    println!();

    let mut head = vec!["candidate".to_string()];
    head.extend(report.publics.iter().map(|p| format!("mod {}", p.cross_modulus)));
    head.push("feasible".to_string());
    head.push("secret".to_string());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for c in &report.candidates {
        let mut row = vec![c.value.to_string()];
        for r in &c.residues {
            row.push(format!("{}{}", r.value, if r.in_range { "" } else { "*" }));
        }
        row.push(if c.feasible { "yes" } else { "no" }.to_string());
        row.push(c.secret.to_string());
        rows.push(row);
    }
    let mut widths: Vec<usize> = head.iter().map(String::len).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let render_row = |cells: &[String]| {
        let aligned: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, cell)| format!("{cell:>width$}", width = widths[i]))
            .collect();
        format!("  {}", aligned.join("  "))
    };
    println!("{}", render_row(&head));
    for row in &rows {
        println!("{}", render_row(row));
    }
    println!();
    let survivors: Vec<String> = report.survivors.iter().map(BigUint::to_string).collect();
    let secrets: Vec<String> = report.secrets.iter().map(BigUint::to_string).collect();
    println!("surviving blinded values: {}", survivors.join(" "));
    println!("recovered secrets: {}", secrets.join(" "));
    Ok(0)
}
