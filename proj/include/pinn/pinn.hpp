#pragma once
// Umbrella header.

#include "pinn/errors.hpp"
#include "pinn/net.hpp"
#include "pinn/dual.hpp"
#include "pinn/loss.hpp"
#include "pinn/gradients.hpp"
#include "pinn/grad_sensitivity.hpp"
#include "pinn/grad_adjoint.hpp"
#include "pinn/grad_findiff.hpp"
#include "pinn/engine.hpp"
#include "pinn/optim.hpp"
#include "pinn/train.hpp"
#include "pinn/validate.hpp"
#include "pinn/io.hpp"
#include "pinn/verify.hpp"
