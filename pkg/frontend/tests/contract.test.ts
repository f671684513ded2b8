// The wire format must match the service's documented generate request
// byte for byte after JSON encoding: fixed key order, no extra whitespace.

import { describe, expect, it } from "vitest";

import { buildUpload, encodeUpload } from "../src/core.js";

describe("upload encoding", () => {
  it("matches the documented generate body byte for byte", () => {
    const upload = buildUpload("demo", [
      { path: "cli.py", content: "print(1)\n" },
      { path: "util/helpers.py", content: "X = 2\n" },
    ]);
    expect(encodeUpload(upload)).toBe(
      '{"project_name":"demo","files":' +
        '[{"path":"cli.py","content":"print(1)\\n"},' +
        '{"path":"util/helpers.py","content":"X = 2\\n"}]}',
    );
  });

  it("encodes a missing project name as JSON null", () => {
    expect(encodeUpload(buildUpload(null, []))).toBe(
      '{"project_name":null,"files":[]}',
    );
  });

  it("escapes content exactly as JSON requires", () => {
    const upload = buildUpload("q", [
      { path: "a.py", content: 'say("hi")\n\tcafé' },
    ]);
    expect(encodeUpload(upload)).toBe(
      '{"project_name":"q","files":[{"path":"a.py","content":"say(\\"hi\\")\\n\\tcafé"}]}',
    );
  });

  it("round-trips through JSON.parse unchanged", () => {
    const upload = buildUpload("demo", [{ path: "m.py", content: "pass\n" }]);
    expect(JSON.parse(encodeUpload(upload))).toEqual(upload);
  });

  it("keeps path before content inside every file item", () => {
    const encoded = encodeUpload(
      buildUpload("p", [{ path: "x.py", content: "c" }]),
    );
    expect(encoded.indexOf('"path"')).toBeLessThan(encoded.indexOf('"content"'));
    expect(encoded.indexOf('"project_name"')).toBeLessThan(
      encoded.indexOf('"files"'),
    );
  });
});
