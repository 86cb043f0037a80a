// SPDX-License-Identifier: Apache-2.0
//
// lcxpin: simulation and optimization toolkit for leaky-coaxial-cable
// pinching-antenna downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef LCX_LCX_HPP
#define LCX_LCX_HPP

#include "analysis.hpp"
#include "channel.hpp"
#include "common.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "game.hpp"
#include "power.hpp"
#include "rate.hpp"
#include "scenario.hpp"

#endif
