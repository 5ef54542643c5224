// Command-line front end: encode, decode, eval, sweep, gen, proxy-fit and
// refiner-init.  Exit codes: 0 ok, 1 codec error, 2 usage or I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "draht/codec.hpp"
#include "draht/color.hpp"
#include "draht/error.hpp"
#include "draht/metrics.hpp"
#include "draht/ply.hpp"
#include "draht/rate_proxy.hpp"
#include "draht/refiner.hpp"
#include "draht/synthetic.hpp"

namespace fs = std::filesystem;
using namespace draht;

namespace {

const std::vector<double> kDefaultSweep = {8, 10, 12, 16, 24, 32, 48, 64, 128, 224};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//============================================================================

std::vector<uint8_t>
readFile(const fs::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void
writeFile(const fs::path& path, const std::vector<uint8_t>& bytes)
{
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out)
    throw IoError("cannot write '" + path.string() + "'");
}

// 3-channel clouds are coded in YUV, anything else channel by channel
bool
usesYuv(const VoxelizedPointCloud& cloud)
{
  return cloud.channels() == 3;
}

VoxelizedPointCloud
toCodingDomain(VoxelizedPointCloud cloud)
{
  return usesYuv(cloud) ? rgbToYuv(std::move(cloud)) : cloud;
}

VoxelizedPointCloud
toFileDomain(VoxelizedPointCloud cloud)
{
  return usesYuv(cloud) ? yuvToRgb(std::move(cloud)) : cloud;
}

// What a reader of the written PLY sees, in the coding domain.
VoxelizedPointCloud
roundTripThroughPly(const VoxelizedPointCloud& coded)
{
  VoxelizedPointCloud out = toFileDomain(coded);
  for (auto& v : out.attributes.data())
    v = !(v > 0) ? 0.0 : v >= 255 ? 255.0 : double(std::lround(v));
  return toCodingDomain(std::move(out));
}

std::shared_ptr<const PredictionRefiner>
loadRefiner(const std::string& path)
{
  if (path.empty())
    return nullptr;
  return std::make_shared<GraphRefiner>(loadGraph(path));
}

//----------------------------------------------------------------------------

enum class Mode { kVanilla, kPredictive, kRefined };

std::string
modeName(Mode m)
{
  switch (m) {
  case Mode::kVanilla: return "vanilla";
  case Mode::kPredictive: return "predictive";
  case Mode::kRefined: return "predictive+refiner";
  }
  return "";
}

Mode
parseMode(const std::string& s)
{
  if (s == "vanilla") return Mode::kVanilla;
  if (s == "predictive") return Mode::kPredictive;
  if (s == "predictive+refiner" || s == "refined") return Mode::kRefined;
  throw UsageError("unknown mode '" + s + "'");
}

struct RunOutcome {
  EncodeResult encoded;
  PsnrReport quality;
  double bpp = 0;
};

RunOutcome
runCodec(
  const VoxelizedPointCloud& cloud,
  const std::vector<double>& qs,
  Mode mode,
  std::shared_ptr<const PredictionRefiner> refiner,
  size_t blockSize,
  unsigned threads)
{
  EncoderConfig cfg;
  cfg.qs = qs;
  cfg.blockSize = blockSize;
  cfg.threads = threads;
  if (mode == Mode::kVanilla)
    cfg.prediction = noPrediction();
  if (mode == Mode::kRefined)
    cfg.prediction.refiner = std::move(refiner);

  RunOutcome out;
  out.encoded = encode(cloud, cfg);
  out.quality = psnr(cloud, roundTripThroughPly(out.encoded.reconstruction));
  out.bpp = 8.0 * double(out.encoded.bytes.size()) / double(cloud.size());
  return out;
}

CsvRow
makeRow(const std::string& name, Mode mode, double qs, const RunOutcome& r)
{
  CsvRow row;
  row.cloud = name;
  row.codec = modeName(mode);
  row.qs = qs;
  row.bpp = r.bpp;
  const auto& db = r.quality.channelDb;
  row.psnrY = db.size() > 0 ? db[0] : 0;
  row.psnrU = db.size() > 1 ? db[1] : 0;
  row.psnrV = db.size() > 2 ? db[2] : 0;
  row.psnrYuv = r.quality.combinedDb;
  row.proxyBits = r.encoded.stats.proxyBits();
  row.actualBits = r.encoded.stats.payloadBits();
  return row;
}

void
printQuality(const PsnrReport& q)
{
  std::printf("psnr");
  for (size_t c = 0; c < q.channelDb.size(); c++)
    std::printf(" ch%zu=%s", c, formatDb(q.channelDb[c]).c_str());
  std::printf(" combined=%s dB\n", formatDb(q.combinedDb).c_str());
}

class CsvSink {
public:
  CsvSink(const std::string& path, bool append)
  {
    if (path.empty())
      return;
    const bool fresh = !append || !fs::exists(path) || fs::file_size(path) == 0;
    out_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!out_)
      throw IoError("cannot write '" + path + "'");
    if (fresh)
      out_ << csvHeader() << "\n";
  }

  void add(const CsvRow& row)
  {
    if (out_.is_open())
      out_ << csvLine(row) << "\n";
  }

private:
  std::ofstream out_;
};

void
requireAscending(const std::vector<double>& qs)
{
  for (size_t i = 0; i < qs.size(); i++) {
    if (!(qs[i] > 0))
      throw UsageError("qs values must be positive");
    if (i > 0 && !(qs[i] > qs[i - 1]))
      throw UsageError("qs values must be ascending");
  }
}

double
rSquared(const std::vector<double>& actual, const std::vector<double>& predicted)
{
  double mean = 0;
  for (double a : actual)
    mean += a;
  mean /= double(actual.size());
  double ssRes = 0, ssTot = 0;
  for (size_t i = 0; i < actual.size(); i++) {
    ssRes += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ssTot += (actual[i] - mean) * (actual[i] - mean);
  }
  return ssTot > 0 ? 1.0 - ssRes / ssTot : 1.0;
}

}  // namespace

//============================================================================

int
main(int argc, char** argv)
{
  CLI::App app{"Predictive dyadic RAHT point cloud attribute codec"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file mirroring the command-line flags");

  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads; output bytes do not depend on it")
    ->envname("DRAHT_THREADS")
    ->check(CLI::Range(1u, 1024u));

  // encode ------------------------------------------------------------------
  auto* encodeCmd = app.add_subcommand("encode", "Encode point cloud attributes");
  std::string encInput, encOut, encRefiner, encRecon;
  std::vector<double> encQs = {8.0};
  bool encNoPred = false;
  size_t encBlock = 2'000'000;
  int encDepth = 0;
  encodeCmd->add_option("--input,-i", encInput, "Input PLY")->required();
  encodeCmd->add_option("--out,-o", encOut, "Output bitstream")->required();
  encodeCmd->add_option("--qs", encQs, "Quantization step; repeat once per channel")
    ->expected(1, 255);
  encodeCmd->add_flag("--no-prediction", encNoPred, "Vanilla RAHT: code raw AC coefficients");
  encodeCmd->add_option("--refiner", encRefiner, "Refiner weight file (DRWT)");
  encodeCmd->add_option("--block-size", encBlock, "Maximum points per independently coded block")
    ->check(CLI::PositiveNumber);
  encodeCmd->add_option("--depth", encDepth, "Geometry depth (default: inferred)");
  encodeCmd->add_option("--recon", encRecon, "Also write the reconstruction as PLY");

  // decode ------------------------------------------------------------------
  auto* decodeCmd = app.add_subcommand("decode", "Decode attributes onto a geometry");
  std::string decInput, decGeometry, decOut, decRefiner;
  bool decAscii = false;
  decodeCmd->add_option("--input,-i", decInput, "Bitstream")->required();
  decodeCmd->add_option("--geometry,-g", decGeometry, "PLY providing the positions")->required();
  decodeCmd->add_option("--out,-o", decOut, "Output PLY")->required();
  decodeCmd->add_option("--refiner", decRefiner, "Refiner weight file used at encode time");
  decodeCmd->add_flag("--ascii", decAscii, "Write ASCII PLY");

  // eval --------------------------------------------------------------------
  auto* evalCmd = app.add_subcommand("eval", "Compare a reconstruction with its original");
  std::string evOrig, evRecon, evBits, evCsv, evName = "cloud", evCodec = "unknown";
  double evQs = 0;
  evalCmd->add_option("--original", evOrig, "Original PLY")->required();
  evalCmd->add_option("--reconstructed", evRecon, "Reconstructed PLY")->required();
  evalCmd->add_option("--bitstream", evBits, "Bitstream, for bpp");
  evalCmd->add_option("--csv", evCsv, "Append a row to this CSV file");
  evalCmd->add_option("--name", evName, "Cloud name for the CSV row");
  evalCmd->add_option("--codec", evCodec, "Codec label for the CSV row");
  evalCmd->add_option("--qs", evQs, "Quantization step label for the CSV row");

  // sweep -------------------------------------------------------------------
  auto* sweepCmd = app.add_subcommand("sweep", "Rate-distortion sweep over qs and modes");
  std::string swInput, swCsv, swRefiner;
  std::vector<double> swQs = kDefaultSweep;
  std::vector<std::string> swModes = {"vanilla", "predictive"};
  size_t swBlock = 2'000'000;
  sweepCmd->add_option("--input,-i", swInput, "Input PLY")->required();
  sweepCmd->add_option("--qs", swQs, "Quantization steps (ascending)");
  sweepCmd->add_option("--modes", swModes, "vanilla, predictive, predictive+refiner")
    ->delimiter(',');
  sweepCmd->add_option("--refiner", swRefiner, "Refiner weights for predictive+refiner");
  sweepCmd->add_option("--csv", swCsv, "Output CSV");
  sweepCmd->add_option("--block-size", swBlock, "Maximum points per block")
    ->check(CLI::PositiveNumber);

  // gen ---------------------------------------------------------------------
  auto* genCmd = app.add_subcommand("gen", "Generate a seeded synthetic voxelized cloud");
  std::string genShape = "sphere", genTexture = "gradient", genOut;
  SyntheticSpec genSpec;
  bool genAscii = false;
  genCmd->add_option("--shape", genShape, "sphere, plane or uniform");
  genCmd->add_option("--texture", genTexture, "gradient, checker, noise, constant or smooth");
  genCmd->add_option("--depth", genSpec.depth, "Geometry depth")->check(CLI::Range(1, 12));
  genCmd->add_option("--radius", genSpec.radius, "Sphere radius as a fraction of the grid");
  genCmd->add_option("--keep", genSpec.keep, "Fraction of voxels kept")
    ->check(CLI::Range(0.0, 1.0));
  genCmd->add_option("--points", genSpec.points, "Point count for the uniform shape");
  genCmd->add_option("--checker", genSpec.checkerCell, "Checker cell size");
  genCmd->add_option("--noise", genSpec.noise, "Noise amplitude for the smooth texture");
  genCmd->add_option("--seed", genSpec.seed, "Random seed");
  genCmd->add_option("--out,-o", genOut, "Output PLY")->required();
  genCmd->add_flag("--ascii", genAscii, "Write ASCII PLY");

  // proxy-fit ---------------------------------------------------------------
  auto* fitCmd = app.add_subcommand("proxy-fit", "Compare the rate proxy with coded bits");
  std::vector<std::string> fitInputs;
  std::vector<double> fitQs = kDefaultSweep;
  std::string fitCsv;
  RateProxyParams fitParams;
  fitCmd->add_option("--input,-i", fitInputs, "Input PLY files")->required();
  fitCmd->add_option("--qs", fitQs, "Quantization steps (ascending)");
  fitCmd->add_option("--alpha", fitParams.alpha, "Proxy scale factor");
  fitCmd->add_option("--mu", fitParams.mu, "Laplace location");
  fitCmd->add_option("--sigma", fitParams.sigma, "Laplace scale");
  fitCmd->add_option("--csv", fitCsv, "Write cloud,qs,proxy_bits,actual_bits rows");

  // refiner-init ------------------------------------------------------------
  auto* initCmd = app.add_subcommand("refiner-init", "Write a refiner weight file");
  std::string initOut;
  size_t initChannels = 3;
  uint32_t initHidden = 128;
  double initScale = 0.0;
  uint64_t initSeed = 0;
  initCmd->add_option("--out,-o", initOut, "Output weight file")->required();
  initCmd->add_option("--channels", initChannels, "Attribute channels")->check(CLI::Range(1, 255));
  initCmd->add_option("--hidden", initHidden, "Hidden width")->check(CLI::Range(1u, 4096u));
  initCmd->add_option("--scale", initScale, "Uniform weight range; 0 writes a zero refiner");
  initCmd->add_option("--seed", initSeed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*encodeCmd) {
      PlyReadOptions ro;
      if (encDepth > 0)
        ro.depth = encDepth;
      const VoxelizedPointCloud cloud = toCodingDomain(loadPly(encInput, ro));
      const Mode mode = encNoPred ? Mode::kVanilla
                                  : encRefiner.empty() ? Mode::kPredictive : Mode::kRefined;
      RunOutcome r = runCodec(cloud, encQs, mode, loadRefiner(encRefiner), encBlock, threads);
      writeFile(encOut, r.encoded.bytes);

      const auto& st = r.encoded.stats;
      std::printf("points %zu  bytes %zu  header %zu  bpp %.6f\n", cloud.size(), st.totalBytes,
                  st.headerBytes, r.bpp);
      std::printf("%5s %9s %4s %12s %14s\n", "scale", "ac", "mode", "bits", "proxy_bits");
      for (auto it = st.scales.rbegin(); it != st.scales.rend(); ++it) {
        uint64_t bits = 0;
        double proxy = 0;
        for (size_t c = 0; c < it->bits.size(); c++) {
          bits += it->bits[c];
          proxy += it->proxyBits[c];
        }
        const char* m = it->refinedChunks ? "R" : it->predictedChunks ? "P" : "-";
        std::printf("%5d %9zu %4s %12llu %14.1f\n", it->scale, it->acCount, m,
                    (unsigned long long)bits, proxy);
      }
      std::printf("payload bits %.0f  proxy estimate %.1f\n", st.payloadBits(), st.proxyBits());
      printQuality(r.quality);
      if (!encRecon.empty())
        writePly(toFileDomain(r.encoded.reconstruction), encRecon);
      return 0;
    }

    if (*decodeCmd) {
      const auto bytes = readFile(decInput);
      const VoxelizedPointCloud geometry = loadPly(decGeometry);
      VoxelizedPointCloud rec = decode(bytes, geometry, loadRefiner(decRefiner), threads);
      rec = toFileDomain(std::move(rec));
      rec.depth = geometry.depth;
      writePly(rec, decOut, decAscii ? PlyFormat::kAscii : PlyFormat::kBinaryLittleEndian);
      std::printf("decoded %zu points\n", rec.size());
      return 0;
    }

    if (*evalCmd) {
      const VoxelizedPointCloud orig = toCodingDomain(loadPly(evOrig));
      VoxelizedPointCloud rec = toCodingDomain(loadPly(evRecon));
      rec.depth = orig.depth;
      RunOutcome r;
      r.quality = psnr(orig, rec);
      if (!evBits.empty())
        r.bpp = 8.0 * double(fs::file_size(evBits)) / double(orig.size());
      printQuality(r.quality);
      if (!evBits.empty())
        std::printf("bpp %.6f\n", r.bpp);
      CsvSink csv(evCsv, true);
      CsvRow row;
      row.cloud = evName;
      row.codec = evCodec;
      row.qs = evQs;
      row.bpp = r.bpp;
      const auto& db = r.quality.channelDb;
      row.psnrY = db.size() > 0 ? db[0] : 0;
      row.psnrU = db.size() > 1 ? db[1] : 0;
      row.psnrV = db.size() > 2 ? db[2] : 0;
      row.psnrYuv = r.quality.combinedDb;
      row.actualBits = r.bpp * double(orig.size());
      csv.add(row);
      return 0;
    }

    if (*sweepCmd) {
      requireAscending(swQs);
      std::vector<Mode> modes;
      for (const auto& m : swModes)
        modes.push_back(parseMode(m));
      auto refiner = loadRefiner(swRefiner);
      if (std::count(modes.begin(), modes.end(), Mode::kRefined) && !refiner)
        throw UsageError("predictive+refiner mode needs --refiner");

      const VoxelizedPointCloud cloud = toCodingDomain(loadPly(swInput));
      const std::string name = fs::path(swInput).stem().string();
      CsvSink csv(swCsv, false);
      std::map<Mode, std::vector<RDPoint>> curves;

      std::printf("%s\n", csvHeader().c_str());
      for (Mode mode : modes) {
        for (double q : swQs) {
          RunOutcome r = runCodec(cloud, {q}, mode, refiner, swBlock, threads);
          const CsvRow row = makeRow(name, mode, q, r);
          csv.add(row);
          std::printf("%s\n", csvLine(row).c_str());
          if (std::isfinite(r.quality.combinedDb))
            curves[mode].push_back({r.bpp, r.quality.combinedDb});
        }
      }
      for (size_t i = 0; i < modes.size(); i++)
        for (size_t j = i + 1; j < modes.size(); j++) {
          try {
            const double bd = bdRate(curves[modes[i]], curves[modes[j]]);
            std::printf("bd-rate %s vs %s: %+.2f%%\n", modeName(modes[j]).c_str(),
                        modeName(modes[i]).c_str(), bd);
          } catch (const CodecError& e) {
            std::printf("bd-rate %s vs %s: n/a (%s)\n", modeName(modes[j]).c_str(),
                        modeName(modes[i]).c_str(), e.what());
          }
        }
      return 0;
    }

    if (*genCmd) {
      genSpec.shape = parseShape(genShape);
      genSpec.texture = parseTexture(genTexture);
      const VoxelizedPointCloud cloud = generateCloud(genSpec);
      writePly(cloud, genOut, genAscii ? PlyFormat::kAscii : PlyFormat::kBinaryLittleEndian);
      std::printf("wrote %zu points at depth %d\n", cloud.size(), cloud.depth);
      return 0;
    }

    if (*fitCmd) {
      requireAscending(fitQs);
      validate(fitParams);
      std::vector<double> actual, proxy;
      std::ofstream csv;
      if (!fitCsv.empty()) {
        csv.open(fitCsv);
        if (!csv)
          throw IoError("cannot write '" + fitCsv + "'");
        csv << "cloud,qs,proxy_bits,actual_bits\n";
      }
      for (const auto& input : fitInputs) {
        const VoxelizedPointCloud cloud = toCodingDomain(loadPly(input));
        for (double q : fitQs) {
          EncoderConfig cfg;
          cfg.qs = {q};
          cfg.threads = threads;
          cfg.proxy = fitParams;
          const EncodeResult r = encode(cloud, cfg);
          actual.push_back(r.stats.payloadBits());
          proxy.push_back(r.stats.proxyBits());
          if (csv.is_open())
            csv << fs::path(input).stem().string() << "," << q << "," << proxy.back() << ","
                << actual.back() << "\n";
        }
      }
      // least-squares alpha through the origin
      double num = 0, den = 0;
      for (size_t i = 0; i < actual.size(); i++) {
        const double h = proxy[i] / fitParams.alpha;
        num += h * actual[i];
        den += h * h;
      }
      std::printf("samples %zu\n", actual.size());
      std::printf("r2 %.6f (alpha %.4f mu %.4f sigma %.4f)\n", rSquared(actual, proxy),
                  fitParams.alpha, fitParams.mu, fitParams.sigma);
      if (den > 0)
        std::printf("least-squares alpha %.6f\n", num / den);
      return 0;
    }

    if (*initCmd) {
      saveGraph(defaultTopology(initChannels, initHidden, initScale, initSeed), initOut);
      std::printf("wrote refiner weights to %s\n", initOut.c_str());
      return 0;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const CodecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
