//! Reader for the index-based cascade XML interchange format.
//!
//! Expected document shape: a root storage element containing a `<cascade>`
//! with `stageType` BOOST, `featureType` HAAR, the base window `height` and
//! `width`, a `<stages>` list (each entry: `maxWeakCount`, `stageThreshold`,
//! `weakClassifiers` whose entries carry `internalNodes` = "0 -1 featureIndex
//! threshold" and `leafValues` = "left right"), and a `<features>` list (each
//! entry: `rects` with lines "x y w h weight" and an optional `tilted` flag).
//!
//! Old-style documents (`type_id="opencv-haar-classifier"`, nested trees) and
//! non-HAAR feature types are rejected with [`CascadeError::UnsupportedFormat`].

use super::{CascadeError, CascadeModel, HaarFeature, Stage, Stump, WeightedRect};
use crate::imaging::Rect;
use roxmltree::{Document, Node};

const OLD_STYLE_TYPE_ID: &str = "opencv-haar-classifier";

/// Parses and fully validates a cascade model document.
///
/// Every model returned here passes [`CascadeModel::validate`] with zero
/// violations; structural defects surface as [`CascadeError`] values, never
/// panics, regardless of input.
pub fn parse_cascade_xml(bytes: &[u8]) -> Result<CascadeModel, CascadeError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CascadeError::MalformedXml(format!("not valid UTF-8: {e}")))?;
    let doc = Document::parse(text).map_err(|e| CascadeError::MalformedXml(e.to_string()))?;

    let root = doc.root_element();
    let cascade = find_cascade(root)?;

    let stage_type = child_text(cascade, "stageType").unwrap_or_default();
    if !stage_type.is_empty() && stage_type != "BOOST" {
        return Err(CascadeError::UnsupportedFormat(format!(
            "stageType {stage_type:?} (only BOOST is supported)"
        )));
    }
    let feature_type = child_text(cascade, "featureType").unwrap_or_default();
    if feature_type != "HAAR" {
        return Err(CascadeError::UnsupportedFormat(format!(
            "featureType {feature_type:?} (only HAAR is supported)"
        )));
    }

    let base_width = parse_scalar::<u32>(cascade, "width")?;
    let base_height = parse_scalar::<u32>(cascade, "height")?;

    let stages_node = named_child(cascade, "stages")
        .ok_or_else(|| CascadeError::InvariantViolation("missing stages list".into()))?;
    let stages = element_children(stages_node)
        .enumerate()
        .map(|(i, n)| parse_stage(n, i))
        .collect::<Result<Vec<_>, _>>()?;

    let features_node = named_child(cascade, "features")
        .ok_or_else(|| CascadeError::InvariantViolation("missing features list".into()))?;
    let features = element_children(features_node)
        .enumerate()
        .map(|(k, n)| parse_feature(n, k))
        .collect::<Result<Vec<_>, _>>()?;

    let model = CascadeModel {
        base_width,
        base_height,
        stages,
        features,
    };
    let violations = model.validate();
    if let Some(first) = violations.first() {
        return Err(CascadeError::InvariantViolation(format!(
            "{first}{}",
            if violations.len() > 1 {
                format!(" (and {} more)", violations.len() - 1)
            } else {
                String::new()
            }
        )));
    }
    Ok(model)
}

fn find_cascade<'a>(root: Node<'a, 'a>) -> Result<Node<'a, 'a>, CascadeError> {
    // old-style models mark their root entry with type_id="opencv-haar-classifier"
    for child in element_children(root) {
        if child.attribute("type_id") == Some(OLD_STYLE_TYPE_ID) {
            return Err(CascadeError::UnsupportedFormat(format!(
                "old-style document (type_id=\"{OLD_STYLE_TYPE_ID}\")"
            )));
        }
    }
    element_children(root)
        .find(|n| n.tag_name().name() == "cascade")
        .ok_or_else(|| CascadeError::UnsupportedFormat("no <cascade> element".into()))
}

fn element_children<'a>(node: Node<'a, 'a>) -> impl Iterator<Item = Node<'a, 'a>> {
    node.children().filter(|c| c.is_element())
}

fn named_child<'a>(node: Node<'a, 'a>, name: &str) -> Option<Node<'a, 'a>> {
    element_children(node).find(|c| c.tag_name().name() == name)
}

fn child_text<'a>(node: Node<'a, 'a>, name: &str) -> Option<&'a str> {
    named_child(node, name)
        .and_then(|c| c.text())
        .map(str::trim)
}

fn parse_scalar<T: std::str::FromStr>(node: Node, name: &str) -> Result<T, CascadeError> {
    let text = child_text(node, name)
        .filter(|t| !t.is_empty())
        .ok_or_else(|| CascadeError::InvariantViolation(format!("missing {name}")))?;
    text.parse()
        .map_err(|_| CascadeError::InvariantViolation(format!("{name}: cannot parse {text:?}")))
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>, CascadeError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| {
                CascadeError::InvariantViolation(format!("{what}: non-numeric token {tok:?}"))
            })
        })
        .collect()
}

fn parse_stage(node: Node, index: usize) -> Result<Stage, CascadeError> {
    let at = |field: &str| format!("stage {index}: {field}");
    let threshold: f64 = child_text(node, "stageThreshold")
        .filter(|t| !t.is_empty())
        .ok_or_else(|| CascadeError::InvariantViolation(at("missing stageThreshold")))?
        .parse()
        .map_err(|_| CascadeError::InvariantViolation(at("stageThreshold not numeric")))?;

    let weak = named_child(node, "weakClassifiers")
        .ok_or_else(|| CascadeError::InvariantViolation(at("missing weakClassifiers")))?;
    let stumps = element_children(weak)
        .enumerate()
        .map(|(j, n)| parse_stump(n, index, j))
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(count) = child_text(node, "maxWeakCount") {
        let expected: usize = count
            .parse()
            .map_err(|_| CascadeError::InvariantViolation(at("maxWeakCount not numeric")))?;
        if expected != stumps.len() {
            return Err(CascadeError::InvariantViolation(format!(
                "stage {index}: maxWeakCount {expected} does not match {} weak classifiers",
                stumps.len()
            )));
        }
    }
    Ok(Stage { stumps, threshold })
}

fn parse_stump(node: Node, stage: usize, index: usize) -> Result<Stump, CascadeError> {
    let at = |msg: String| {
        CascadeError::InvariantViolation(format!("stage {stage} / stump {index}: {msg}"))
    };

    let internal =
        child_text(node, "internalNodes").ok_or_else(|| at("missing internalNodes".into()))?;
    let nodes = parse_numbers(internal, "internalNodes")?;
    if nodes.len() != 4 {
        if nodes.len() > 4 && nodes.len() % 4 == 0 {
            return Err(CascadeError::UnsupportedFormat(format!(
                "stage {stage} / stump {index}: {}-node tree (only single-node stumps are supported)",
                nodes.len() / 4
            )));
        }
        return Err(at(format!(
            "internalNodes has {} values, expected 4",
            nodes.len()
        )));
    }
    if nodes[0] != 0.0 || nodes[1] != -1.0 {
        return Err(CascadeError::UnsupportedFormat(format!(
            "stage {stage} / stump {index}: internal node children ({} {}) describe a tree, not a stump",
            nodes[0], nodes[1]
        )));
    }
    let feature_index = nodes[2];
    if feature_index < 0.0 || feature_index.fract() != 0.0 || feature_index > usize::MAX as f64 {
        return Err(at(format!(
            "feature index {feature_index} is not a valid index"
        )));
    }

    let leaves_text =
        child_text(node, "leafValues").ok_or_else(|| at("missing leafValues".into()))?;
    let leaves = parse_numbers(leaves_text, "leafValues")?;
    if leaves.len() != 2 {
        return Err(at(format!(
            "leafValues has {} values, expected 2",
            leaves.len()
        )));
    }

    Ok(Stump {
        feature_index: feature_index as usize,
        threshold: nodes[3],
        left_leaf: leaves[0],
        right_leaf: leaves[1],
    })
}

fn parse_feature(node: Node, index: usize) -> Result<HaarFeature, CascadeError> {
    let at = |msg: String| CascadeError::InvariantViolation(format!("feature {index}: {msg}"));

    if let Some(tilted) = child_text(node, "tilted") {
        if tilted != "0" {
            return Err(CascadeError::UnsupportedFormat(format!(
                "feature {index}: tilted flag set (tilted features are not supported)"
            )));
        }
    }

    let rects_node = named_child(node, "rects").ok_or_else(|| at("missing rects".into()))?;
    let mut rects = Vec::new();
    for line in element_children(rects_node) {
        let text = line.text().unwrap_or("");
        let values = parse_numbers(text, "rect")?;
        if values.len() != 5 {
            return Err(at(format!(
                "rect line has {} values, expected 5",
                values.len()
            )));
        }
        let coord = |v: f64, what: &str| -> Result<u32, CascadeError> {
            if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
                Err(at(format!("rect {what} {v} is not a non-negative integer")))
            } else {
                Ok(v as u32)
            }
        };
        rects.push(WeightedRect {
            rect: Rect::new(
                coord(values[0], "x")?,
                coord(values[1], "y")?,
                coord(values[2], "w")?,
                coord(values[3], "h")?,
            ),
            weight: values[4],
        });
    }
    Ok(HaarFeature { rects })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = include_str!("../../fixtures/toy_cascade.xml");

    #[test]
    fn parses_the_toy_fixture() {
        let model = parse_cascade_xml(TOY.as_bytes()).unwrap();
        assert_eq!((model.base_width, model.base_height), (4, 4));
        assert_eq!(model.stages.len(), 1);
        assert_eq!(model.features.len(), 2);
        assert_eq!(model.stages[0].threshold, 1.5);
        let stumps = &model.stages[0].stumps;
        assert_eq!(stumps.len(), 2);
        assert_eq!(stumps[0].feature_index, 0);
        assert_eq!(stumps[0].threshold, 0.5);
        assert_eq!((stumps[0].left_leaf, stumps[0].right_leaf), (-1.0, 1.0));
        assert_eq!(stumps[1].feature_index, 1);
        assert_eq!(stumps[1].threshold, 0.25);
        assert_eq!((stumps[1].left_leaf, stumps[1].right_leaf), (1.0, -1.0));
        assert_eq!(model.features[0].rects[0].rect, Rect::new(0, 0, 4, 4));
        assert_eq!(model.features[0].rects[0].weight, -1.0);
        assert_eq!(model.features[0].rects[1].rect, Rect::new(0, 0, 4, 2));
        assert_eq!(model.features[0].rects[1].weight, 2.0);
        assert!(model.validate().is_empty());
    }

    #[test]
    fn parse_is_deterministic_and_whitespace_insensitive() {
        let a = parse_cascade_xml(TOY.as_bytes()).unwrap();
        let b = parse_cascade_xml(TOY.as_bytes()).unwrap();
        assert_eq!(a, b);
        // reflow numeric lists across lines
        let reflowed = TOY
            .replace("0 -1 0 5.0e-01", "0 -1\n          0\n          5.0e-01")
            .replace("0 0 4 4 -1.", "0 0\n            4 4\n            -1.");
        assert_eq!(parse_cascade_xml(reflowed.as_bytes()).unwrap(), a);
    }

    #[test]
    fn missing_stage_threshold_names_the_field() {
        let broken = TOY.replace("<stageThreshold>1.5</stageThreshold>", "");
        match parse_cascade_xml(broken.as_bytes()) {
            Err(CascadeError::InvariantViolation(msg)) => assert!(msg.contains("stageThreshold")),
            other => panic!("expected InvariantViolation, got {other:?}"),
        }
    }

    #[test]
    fn old_style_document_is_unsupported() {
        let doc = r#"<?xml version="1.0"?>
<opencv_storage>
<haarcascade type_id="opencv-haar-classifier">
  <size>20 20</size>
</haarcascade>
</opencv_storage>"#;
        match parse_cascade_xml(doc.as_bytes()) {
            Err(CascadeError::UnsupportedFormat(msg)) => {
                assert!(msg.contains("opencv-haar-classifier"))
            }
            other => panic!("expected UnsupportedFormat, got {other:?}"),
        }
    }

    #[test]
    fn non_haar_feature_type_is_unsupported() {
        let doc = TOY.replace(
            "<featureType>HAAR</featureType>",
            "<featureType>LBP</featureType>",
        );
        match parse_cascade_xml(doc.as_bytes()) {
            Err(CascadeError::UnsupportedFormat(msg)) => assert!(msg.contains("LBP")),
            other => panic!("expected UnsupportedFormat, got {other:?}"),
        }
    }

    #[test]
    fn tilted_feature_is_unsupported() {
        let doc = TOY.replace("<tilted>0</tilted>", "<tilted>1</tilted>");
        match parse_cascade_xml(doc.as_bytes()) {
            Err(CascadeError::UnsupportedFormat(msg)) => assert!(msg.contains("tilted")),
            other => panic!("expected UnsupportedFormat, got {other:?}"),
        }
    }

    #[test]
    fn tree_classifiers_are_unsupported() {
        let doc = TOY.replace(
            "<internalNodes>0 -1 0 5.0e-01</internalNodes>",
            "<internalNodes>1 2 0 5.0e-01 0 -1 1 0.1 0 -1 0 0.2</internalNodes>",
        );
        match parse_cascade_xml(doc.as_bytes()) {
            Err(CascadeError::UnsupportedFormat(msg)) => assert!(msg.contains("tree")),
            other => panic!("expected UnsupportedFormat, got {other:?}"),
        }
    }

    #[test]
    fn non_wellformed_xml_is_malformed() {
        let cut = &TOY.as_bytes()[..TOY.len() / 2];
        assert!(matches!(
            parse_cascade_xml(cut),
            Err(CascadeError::MalformedXml(_))
        ));
        assert!(matches!(
            parse_cascade_xml(b"not xml at all"),
            Err(CascadeError::MalformedXml(_))
        ));
        assert!(matches!(
            parse_cascade_xml(&[0xff, 0xfe, 0x00]),
            Err(CascadeError::MalformedXml(_))
        ));
    }

    #[test]
    fn rect_outside_base_window_is_rejected() {
        let doc = TOY.replace("<_>0 0 4 2 2.</_>", "<_>0 0 5 2 2.</_>");
        // the oversized rect also breaks the zero-sum rule; either message is fine
        match parse_cascade_xml(doc.as_bytes()) {
            Err(CascadeError::InvariantViolation(msg)) => assert!(msg.contains("feature 0")),
            other => panic!("expected InvariantViolation, got {other:?}"),
        }
    }
}
