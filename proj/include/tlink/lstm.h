#ifndef TLINK_LSTM_H_
#define TLINK_LSTM_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tlink/rng.h"

namespace tlink {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Weights of one LSTM layer. Gate blocks are stacked in the order input,
// forget, cell candidate, output: rows [k*hidden, (k+1)*hidden) of W, U and b
// belong to gate k.
struct LstmParams {
  enum Gate { kInput = 0, kForget = 1, kCell = 2, kOutput = 3 };

  Matrix W;  // 4*hidden x in
  Matrix U;  // 4*hidden x hidden
  Vector b;  // 4*hidden

  LstmParams() = default;
  LstmParams(int in, int hidden);  // zero-filled

  int in() const { return static_cast<int>(W.cols()); }
  int hidden() const { return static_cast<int>(U.cols()); }
  int ParameterCount() const { return static_cast<int>(W.size() + U.size() + b.size()); }

  auto GateW(Gate g) { return W.middleRows(g * hidden(), hidden()); }
  auto GateU(Gate g) { return U.middleRows(g * hidden(), hidden()); }
  auto GateB(Gate g) { return b.segment(g * hidden(), hidden()); }

  // Glorot-uniform input weights, orthogonal recurrent weights (per gate),
  // zero biases except the forget gate at 1.
  void Initialize(Rng &rng);
};

struct LstmState {
  Vector h;
  Vector c;
};

// One time step: sigmoid input/forget/output gates, tanh candidate,
// c = f*c_prev + i*g, h = o*tanh(c).
LstmState LstmStep(const LstmParams &p, const Vector &x, const Vector &h_prev,
                   const Vector &c_prev);

// Activations recorded by LstmEncode for the backward pass, in processing
// order (already reversed when the layer runs backwards).
struct LstmTrace {
  std::vector<Vector> inputs;  // after dropout
  std::vector<Vector> gates;   // activated [i; f; g; o]
  std::vector<Vector> h;       // h[t], t = 0..T-1
  std::vector<Vector> c;
};

// Runs the layer from a zero state and returns the final hidden state. In
// training mode each input vector gets an inverted-dropout mask drawn from
// `rng` with the given rate. Throws on an empty sequence.
Vector LstmEncode(const LstmParams &p, std::span<const Vector> xs, bool reverse,
                  double input_dropout, bool training, Rng *rng,
                  LstmTrace *trace = nullptr);

// Backpropagation through time from dL/dh_T; accumulates into `grad`.
void LstmBackward(const LstmParams &p, const LstmTrace &trace,
                  const Vector &d_final_h, LstmParams *grad);

// Inverted dropout mask: entries are 0 with probability `rate`, otherwise
// 1/(1-rate).
Vector DropoutMask(int size, double rate, Rng &rng);

double Sigmoid(double x);

}  // namespace tlink

#endif  // TLINK_LSTM_H_
