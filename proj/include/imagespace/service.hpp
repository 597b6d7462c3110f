// SPDX-License-Identifier: Apache-2.0
//
// HTTP service over the store. Every request opens its own database
// connection and re-reads the documents it needs.
#pragma once

#include <memory>
#include <string>

namespace imagespace {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string database = "imagespace.db";
  bool strict_parse = false;
  bool closure_default = true;
  std::string image_base;  // empty: /images is not served
};

/// Applies IMAGESPACE_DB, IMAGESPACE_LISTEN (host:port) and
/// IMAGESPACE_IMAGES when set.
void apply_environment(ServiceConfig& config);

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket; returns the bound port (useful with port 0).
  /// Throws Error(ConnectionFailure).
  int bind();
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace imagespace
