#include "tlink/lstm.h"

#include <cmath>

#include "tlink/error.h"

namespace tlink {

namespace {

Matrix Orthogonal(int n, Rng &rng) {
  Matrix a(n, n);
  for (int i = 0; i < a.size(); ++i) a.data()[i] = rng.Normal();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  // Sign correction so the result is uniformly distributed.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LstmParams::LstmParams(int in, int hidden)
    : W(Matrix::Zero(4 * hidden, in)),
      U(Matrix::Zero(4 * hidden, hidden)),
      b(Vector::Zero(4 * hidden)) {}

void LstmParams::Initialize(Rng &rng) {
  const int h = hidden();
  const double limit = std::sqrt(6.0 / (in() + h));
  for (int gate = 0; gate < 4; ++gate) {
    auto w = GateW(static_cast<Gate>(gate));
    for (int c = 0; c < w.cols(); ++c) {
      for (int r = 0; r < w.rows(); ++r) w(r, c) = rng.Uniform(-limit, limit);
    }
    GateU(static_cast<Gate>(gate)) = Orthogonal(h, rng);
  }
  b.setZero();
  GateB(kForget).setOnes();
}

LstmState LstmStep(const LstmParams &p, const Vector &x, const Vector &h_prev,
                   const Vector &c_prev) {
  const int h = p.hidden();
  if (x.size() != p.in() || h_prev.size() != h || c_prev.size() != h) {
    throw ShapeError("lstm step: input " + std::to_string(x.size()) + "/" +
                     std::to_string(h_prev.size()) + " for layer " +
                     std::to_string(p.in()) + "x" + std::to_string(h));
  }
  Vector a = p.W * x + p.U * h_prev + p.b;
  Vector i = a.segment(0, h).unaryExpr(&Sigmoid);
  Vector f = a.segment(h, h).unaryExpr(&Sigmoid);
  Vector g = a.segment(2 * h, h).array().tanh();
  Vector o = a.segment(3 * h, h).unaryExpr(&Sigmoid);
  LstmState out;
  out.c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
  out.h = o.cwiseProduct(out.c.array().tanh().matrix());
  return out;
}

Vector DropoutMask(int size, double rate, Rng &rng) {
  Vector mask(size);
  const double keep = 1.0 / (1.0 - rate);
  for (int i = 0; i < size; ++i) mask[i] = rng.Uniform() < rate ? 0.0 : keep;
  return mask;
}

Vector LstmEncode(const LstmParams &p, std::span<const Vector> xs, bool reverse,
                  double input_dropout, bool training, Rng *rng,
                  LstmTrace *trace) {
  if (xs.empty()) throw ShapeError("lstm encode: empty input sequence");
  if (input_dropout < 0.0 || input_dropout >= 1.0) {
    throw ConfigError("dropout rate must be in [0, 1)");
  }
  const bool drop = training && input_dropout > 0.0;
  if (drop && rng == nullptr) throw ConfigError("dropout needs a generator");

  const int h = p.hidden();
  const int steps = static_cast<int>(xs.size());
  if (trace) *trace = LstmTrace{};
  Vector h_t = Vector::Zero(h);
  Vector c_t = Vector::Zero(h);
  for (int s = 0; s < steps; ++s) {
    const Vector &raw = xs[reverse ? steps - 1 - s : s];
    if (raw.size() != p.in()) {
      throw ShapeError("lstm encode: input width " + std::to_string(raw.size()) +
                       ", layer expects " + std::to_string(p.in()));
    }
    Vector x = drop ? Vector(raw.cwiseProduct(DropoutMask(p.in(), input_dropout, *rng)))
                    : raw;
    Vector a = p.W * x + p.U * h_t + p.b;
    Vector gates(4 * h);
    gates.segment(0, h) = a.segment(0, h).unaryExpr(&Sigmoid);
    gates.segment(h, h) = a.segment(h, h).unaryExpr(&Sigmoid);
    gates.segment(2 * h, h) = a.segment(2 * h, h).array().tanh();
    gates.segment(3 * h, h) = a.segment(3 * h, h).unaryExpr(&Sigmoid);
    c_t = gates.segment(h, h).cwiseProduct(c_t) +
          gates.segment(0, h).cwiseProduct(gates.segment(2 * h, h));
    h_t = gates.segment(3 * h, h).cwiseProduct(c_t.array().tanh().matrix());
    if (trace) {
      trace->inputs.push_back(std::move(x));
      trace->gates.push_back(std::move(gates));
      trace->h.push_back(h_t);
      trace->c.push_back(c_t);
    }
  }
  return h_t;
}

void LstmBackward(const LstmParams &p, const LstmTrace &trace,
                  const Vector &d_final_h, LstmParams *grad) {
  const int h = p.hidden();
  const int steps = static_cast<int>(trace.h.size());
  Vector dh = d_final_h;
  Vector dc = Vector::Zero(h);
  const Vector zero = Vector::Zero(h);
  Vector da(4 * h);
  for (int t = steps - 1; t >= 0; --t) {
    const Vector &gates = trace.gates[t];
    const auto i = gates.segment(0, h).array();
    const auto f = gates.segment(h, h).array();
    const auto g = gates.segment(2 * h, h).array();
    const auto o = gates.segment(3 * h, h).array();
    const Vector &c_prev = t > 0 ? trace.c[t - 1] : zero;
    const Vector &h_prev = t > 0 ? trace.h[t - 1] : zero;
    const Eigen::ArrayXd tc = trace.c[t].array().tanh();

    dc.array() += dh.array() * o * (1.0 - tc.square());
    da.segment(0, h) = (dc.array() * g * i * (1.0 - i)).matrix();
    da.segment(h, h) = (dc.array() * c_prev.array() * f * (1.0 - f)).matrix();
    da.segment(2 * h, h) = (dc.array() * i * (1.0 - g.square())).matrix();
    da.segment(3 * h, h) = (dh.array() * tc * o * (1.0 - o)).matrix();

    grad->W.noalias() += da * trace.inputs[t].transpose();
    grad->U.noalias() += da * h_prev.transpose();
    grad->b += da;
    dh.noalias() = p.U.transpose() * da;
    dc = (dc.array() * f).matrix();
  }
}

}  // namespace tlink
